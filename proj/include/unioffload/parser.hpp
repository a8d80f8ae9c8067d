// SPDX-License-Identifier: Apache-2.0
//
// Source scanner: splits C/C++-like text into verbatim lines and directive
// invocations. Only line-initial invocations outside comments, literals and
// preprocessor lines are recognized.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unioffload/diagnostic.hpp"
#include "unioffload/registry.hpp"

namespace unioffload {

struct ArgToken {
  enum class Kind { Known, Unknown };
  Kind kind = Kind::Unknown;
  const ClauseAlias* alias = nullptr;  // Known only
  std::string text;                    // the trimmed piece as written
  std::string inner;                   // Known: argument text inside the alias parentheses
  std::size_t offset = 0;              // byte offset of `text` within the argument list
  SourceLocation loc;                  // filled in by scan()
};

struct DirectiveInvocation {
  const DirectiveAlias* alias = nullptr;
  bool has_parens = false;
  std::string args_text;  // interior of the parentheses, verbatim
  std::vector<ArgToken> args;
  std::string indent;         // leading whitespace of the line
  std::string trailing_text;  // after ')' (or the alias name) up to end of line
  std::string newline;        // "\n", "\r\n" or "" at end of input
  SourceLocation loc;         // position of the alias name
  SourceLocation args_loc;    // position of the first byte inside '('
};

struct SourceSegment {
  enum class Kind { Verbatim, Invocation };
  Kind kind = Kind::Verbatim;
  std::string text;  // original bytes
  SourceLocation origin;
  std::optional<DirectiveInvocation> invocation;
};

// Throws Error(UnbalancedParentheses | ArgsOnNoArgsAlias).
std::vector<SourceSegment> scan(std::string_view source, const Registry& registry);

// Top-level comma split of an argument list interior. Never throws.
std::vector<ArgToken> split_args(std::string_view arg_text, const Registry& registry);

// Position of `offset` in `source` as 1-based line/column.
SourceLocation locate(std::string_view source, std::size_t offset);

}  // namespace unioffload
