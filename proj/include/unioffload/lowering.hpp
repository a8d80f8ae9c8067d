// SPDX-License-Identifier: Apache-2.0
//
// Lowering of one parsed invocation to backend pragma lines: clause
// filtering by applicability, launch/loop distribution for split OpenACC
// constructs, keyword dedup and construct-suffix hoisting.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unioffload/diagnostic.hpp"
#include "unioffload/parser.hpp"
#include "unioffload/registry.hpp"

namespace unioffload {

enum class PragmaStyle { Hash, Underscore };
enum class Passthrough { Off, Launch, Loop };

struct PragmaLine {
  std::string construct;  // "acc kernels", "omp target teams loop"
  std::string attached;   // payload written directly after the construct: "(a[0:n])"
  std::string suffix;     // "simd" or empty
  std::vector<std::string> clauses;

  std::string text() const;
  bool operator==(const PragmaLine&) const = default;
};

struct DroppedClause {
  std::string kind;    // clause kind id, or the raw text of a passthrough token
  std::string source;  // alias as written, empty for implicit clauses
  std::string reason;
  bool implicit = false;
  SourceLocation loc;

  bool operator==(const DroppedClause&) const = default;
};

struct LoweringPlan {
  std::vector<PragmaLine> pragmas;
  std::vector<DroppedClause> dropped;
  std::vector<Diagnostic> warnings;
};

struct LowerOptions {
  Passthrough passthrough = Passthrough::Off;
};

// Throws Error(UnknownClause | ArityMismatch) with the token's location.
LoweringPlan lower(const DirectiveInvocation& inv, Backend backend, const Registry& registry,
                   const LowerOptions& options = {});

// Fallback-mode lowering of an OpenACC-like alias through its OpenMP-backend
// counterpart. Throws std::invalid_argument for other notations.
LoweringPlan lower_acc_alias_on_fallback(const DirectiveInvocation& inv, const Registry& registry,
                                         const LowerOptions& options = {});

// Text of one clause in `ctx`: the bare token for construct suffixes, nullopt
// when the clause has no counterpart there or its template needs arguments.
std::optional<std::string> render_clause(const ClauseKind& kind, RenderContext ctx, std::string_view args);

std::string render_line(const PragmaLine& line, PragmaStyle style);

// Hash style: one "#pragma" per line joined by '\n'. Underscore style: the
// _Pragma forms joined by single spaces. Empty plan renders as "".
std::string render(const LoweringPlan& plan, PragmaStyle style);

}  // namespace unioffload
