// SPDX-License-Identifier: Apache-2.0
//
// Row-file oracle. A "row" record names an invocation, backends and the
// pragma lines it must lower to. A "clause" record names one clause alias,
// render contexts and the clause text it must produce there.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unioffload/lowering.hpp"
#include "unioffload/registry.hpp"

namespace unioffload {

struct MappingRow {
  std::string input;
  Backend backend = Backend::Fallback;
  std::optional<RenderContext> context;  // set for clause records; backend is unused then
  std::vector<std::string> expected;     // clause records: at most one entry, none = no counterpart
  std::string source_table;  // group name from the preceding "group" record
  std::size_t line = 0;      // line in the row file
};

// One MappingRow per backend of each "row" record and per context of each
// "clause" record. Throws
// Error(MalformedRowFile) with the offending line.
std::vector<MappingRow> load_rows(std::string_view text);

// Expected text must start with the actual construct (plus suffix), and the
// remaining top-level tokens must equal the actual clauses as a multiset,
// compared with whitespace removed.
bool line_matches(std::string_view expected, const PragmaLine& actual);

struct RowResult {
  const MappingRow* row = nullptr;  // points into the rows passed to verify_all
  bool pass = false;
  std::vector<std::string> actual;
  std::string message;
};

struct ConformanceReport {
  std::vector<RowResult> results;
  std::size_t passed = 0;
  std::size_t failed = 0;

  bool ok() const { return failed == 0; }
  // Failing rows with expected/actual diffs, then a summary line.
  std::string format() const;
};

ConformanceReport verify_all(const std::vector<MappingRow>& rows, const Registry& registry);

}  // namespace unioffload
