// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace unioffload {

struct SourceLocation {
  std::size_t offset = 0;
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in bytes

  bool operator==(const SourceLocation&) const = default;
};

enum class ErrorCode {
  MalformedRegistry,
  DuplicateAlias,
  DanglingCanonicalId,
  IncompleteApplicability,
  UnbalancedParentheses,
  ArgsOnNoArgsAlias,
  UnknownClause,
  ArityMismatch,
  MalformedRowFile,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<SourceLocation> loc = std::nullopt)
      : std::runtime_error(std::move(message)), code_(code), loc_(loc) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourceLocation>& location() const noexcept { return loc_; }

 private:
  ErrorCode code_;
  std::optional<SourceLocation> loc_;
};

enum class Level { Note, Warning, Error };

struct Diagnostic {
  Level level = Level::Warning;
  SourceLocation loc;
  std::string message;
};

std::string_view to_string(Level level);

// "file:line:col: level: message", optionally with ANSI color on the level.
std::string format_diagnostic(const Diagnostic& d, std::string_view file, bool color = false);

}  // namespace unioffload
