// SPDX-License-Identifier: Apache-2.0
#include "unioffload/diagnostic.hpp"

namespace unioffload {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRegistry: return "MalformedRegistry";
    case ErrorCode::DuplicateAlias: return "DuplicateAlias";
    case ErrorCode::DanglingCanonicalId: return "DanglingCanonicalId";
    case ErrorCode::IncompleteApplicability: return "IncompleteApplicability";
    case ErrorCode::UnbalancedParentheses: return "UnbalancedParentheses";
    case ErrorCode::ArgsOnNoArgsAlias: return "ArgsOnNoArgsAlias";
    case ErrorCode::UnknownClause: return "UnknownClause";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::MalformedRowFile: return "MalformedRowFile";
    case ErrorCode::Io: return "Io";
  }
  return "?";
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Note: return "note";
    case Level::Warning: return "warning";
    case Level::Error: return "error";
  }
  return "?";
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file, bool color) {
  std::string out;
  out.append(file);
  out += ':' + std::to_string(d.loc.line) + ':' + std::to_string(d.loc.column) + ": ";
  if (color) {
    switch (d.level) {
      case Level::Note: out += "\x1b[1;36m"; break;
      case Level::Warning: out += "\x1b[1;35m"; break;
      case Level::Error: out += "\x1b[1;31m"; break;
    }
  }
  out.append(to_string(d.level));
  if (color) out += "\x1b[0m";
  out += ": ";
  out += d.message;
  return out;
}

}  // namespace unioffload
