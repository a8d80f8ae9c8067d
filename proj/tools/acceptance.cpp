// SPDX-License-Identifier: Apache-2.0
//
// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "checks.hpp"

int main() {
  constexpr std::size_t kCases = 10000;
  constexpr unsigned kSeed = 20240611;
  const std::vector<std::pair<std::string, std::function<checks::Verdict()>>> criteria = {
      {"table-conformance", checks::table_conformance},
      {"split-example", checks::split_example},
      {"listing-equivalence", checks::listing_equivalence},
      {"flag-truth-table", checks::flag_truth_table},
      {"property-suite", [] { return checks::property_suite(kCases, kSeed); }},
      {"parser-oracle", [] { return checks::parser_oracle(kCases, kSeed); }},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    checks::Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << '\n';
    for (const auto& f : v.failures) std::cout << "    " << f << '\n';
  }
  return all ? 0 : 1;
}
