// SPDX-License-Identifier: Apache-2.0
//
// Catalog of directive and clause aliases, their backend renderings and the
// clause applicability matrix. Loaded from a line-oriented data file (see
// data/registry.txt for the format); immutable after load.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace unioffload {

enum class Backend : std::uint8_t { AccKernels, AccParallel, OmpLoop, OmpDistribute, Fallback };

inline constexpr std::array<Backend, 5> kAllBackends = {
    Backend::AccKernels, Backend::AccParallel, Backend::OmpLoop, Backend::OmpDistribute,
    Backend::Fallback};

std::string_view to_string(Backend b);  // "acc-kernels", ...
std::optional<Backend> parse_backend(std::string_view name);
inline bool is_acc(Backend b) { return b == Backend::AccKernels || b == Backend::AccParallel; }
inline bool is_omp_offload(Backend b) { return b == Backend::OmpLoop || b == Backend::OmpDistribute; }

enum class Notation : std::uint8_t { Intuitive, AccLike, OmpLike };
std::string_view to_string(Notation n);

// Which rendering column applies to a pragma line: OpenACC lines, OpenMP lines
// under an offloading backend, or OpenMP lines everywhere else.
enum class RenderContext : std::uint8_t { Acc, Omp, Fallback };
std::string_view to_string(RenderContext c);

enum class DirectiveArity : std::uint8_t { NoArgs, VarArgs };
enum class ClauseArity : std::uint8_t { NoArgs, RequiredArgs, OptionalArgs };
std::string_view to_string(ClauseArity a);

enum class LineRole : std::uint8_t { Any, Launch, Loop };

struct ClauseTemplate {
  bool absent = true;   // "-": no counterpart in this context
  bool suffix = false;  // construct suffix such as "+simd"
  std::string text;     // template with $ARGS, or the suffix token
  std::string keyword;  // dedup/applicability key: "collapse", "map:to", "()", "+simd"
};

struct ClauseKind {
  std::string id;
  std::array<ClauseTemplate, 3> render;  // indexed by RenderContext
  std::optional<LineRole> split;

  const ClauseTemplate& in(RenderContext c) const { return render[static_cast<int>(c)]; }
};

struct ClauseAlias {
  std::string name;
  Notation notation = Notation::Intuitive;
  std::string kind;
  ClauseArity arity = ClauseArity::NoArgs;
};

struct Primitive {
  std::string id;    // "omp.target_data"
  std::string text;  // "target data"
  bool acc = false;
};

struct LineRecipe {
  LineRole role = LineRole::Any;
  std::vector<std::string> primitives;
};

struct Lowering {
  enum class Kind : std::uint8_t { Lines, Drop, Delegate };
  Kind kind = Kind::Drop;
  std::vector<LineRecipe> lines;
  std::string target;                 // Delegate only
  std::vector<std::string> implicit;  // clause kinds prepended to the argument list
};

struct Payload {
  std::string clause;
  bool attached = false;  // rendered without a space after the construct
};

struct DirectiveKind {
  std::string id;
  std::array<std::optional<Lowering>, 5> lower;  // indexed by Backend
  std::optional<Payload> payload;

  const std::optional<Lowering>& on(Backend b) const { return lower[static_cast<int>(b)]; }
};

struct DirectiveAlias {
  std::string name;
  Notation notation = Notation::Intuitive;
  std::string kind;
  DirectiveArity arity = DirectiveArity::VarArgs;
  std::array<std::string, 5> warning;  // per-backend advisory, empty if none
};

class Registry {
 public:
  // Throws Error with MalformedRegistry, DuplicateAlias, DanglingCanonicalId or
  // IncompleteApplicability.
  static Registry load(std::string_view text);

  // The data file compiled into the library.
  static const Registry& bundled();

  const DirectiveAlias* resolve_directive(std::string_view name) const;
  const ClauseAlias* resolve_clause(std::string_view name) const;

  const DirectiveKind& directive_kind(std::string_view id) const;
  const ClauseKind& clause_kind(std::string_view id) const;
  const Primitive& primitive(std::string_view id) const;

  // Throws IncompleteApplicability for a pair the data file does not cover.
  bool applicable(std::string_view primitive, std::string_view clause_kind) const;

  // Lowering of `kind` on `backend`, with the fallback-mode gap of OpenACC-only
  // directives filled from their OpenMP-backend counterpart.
  const Lowering& lowering(std::string_view kind, Backend backend) const;

  const std::vector<DirectiveAlias>& directives() const { return directives_; }
  const std::vector<ClauseAlias>& clauses() const { return clauses_; }
  const std::vector<ClauseKind>& clause_kinds() const { return clause_kinds_; }
  const std::vector<DirectiveKind>& directive_kinds() const { return directive_kinds_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }
  const std::map<std::pair<std::string, std::string>, bool>& applicability() const {
    return applic_;
  }

 private:
  std::vector<DirectiveAlias> directives_;
  std::vector<ClauseAlias> clauses_;
  std::vector<ClauseKind> clause_kinds_;
  std::vector<DirectiveKind> directive_kinds_;
  std::vector<Primitive> primitives_;
  std::unordered_map<std::string, std::size_t> directive_index_, clause_index_;
  std::unordered_map<std::string, std::size_t> dkind_index_, ckind_index_, prim_index_;
  std::map<std::pair<std::string, std::string>, bool> applic_;
  // Fallback lowerings borrowed through the OpenMP counterpart chain.
  std::unordered_map<std::string, Lowering> borrowed_fallback_;

  void validate();
};

// Clause keyword of a rendering template, as used for applicability and
// duplicate detection ("map(to: $ARGS)" -> "map:to", "+simd" -> "+simd").
std::string template_keyword(std::string_view tmpl);

}  // namespace unioffload
