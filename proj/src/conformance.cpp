// SPDX-License-Identifier: Apache-2.0
#include "unioffload/conformance.hpp"

#include <algorithm>

#include "unioffload/parser.hpp"

namespace unioffload {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string trim(std::string_view s) {
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!is_ws(c)) out += c;
  return out;
}

// Splits on `sep` or on whitespace (sep == 0) outside parentheses.
std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')' && depth > 0) --depth;
    bool cut = depth == 0 && (sep ? c == sep : is_ws(c));
    if (cut) {
      if (sep || !cur.empty()) out.push_back(sep ? trim(cur) : cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (sep || !cur.empty()) out.push_back(sep ? trim(cur) : cur);
  return out;
}

std::vector<Backend> parse_backends(std::string_view spec, std::size_t line) {
  std::vector<Backend> out;
  for (const auto& name : split_top(spec, ',')) {
    if (name == "all") {
      out.assign(kAllBackends.begin(), kAllBackends.end());
    } else if (name == "acc") {
      out.push_back(Backend::AccKernels);
      out.push_back(Backend::AccParallel);
    } else if (name == "omp") {
      out.push_back(Backend::OmpLoop);
      out.push_back(Backend::OmpDistribute);
    } else if (auto b = parse_backend(name)) {
      out.push_back(*b);
    } else {
      throw Error(ErrorCode::MalformedRowFile,
                  "row file line " + std::to_string(line) + ": unknown backend '" + name + "'",
                  SourceLocation{0, line, 1});
    }
  }
  return out;
}

std::vector<RenderContext> parse_contexts(std::string_view spec, std::size_t line) {
  std::vector<RenderContext> out;
  for (const auto& name : split_top(spec, ',')) {
    if (name == "acc") out.push_back(RenderContext::Acc);
    else if (name == "omp") out.push_back(RenderContext::Omp);
    else if (name == "fallback") out.push_back(RenderContext::Fallback);
    else
      throw Error(ErrorCode::MalformedRowFile,
                  "row file line " + std::to_string(line) + ": unknown context '" + name + "'",
                  SourceLocation{0, line, 1});
  }
  return out;
}

RowResult check_clause(const MappingRow& row, const Registry& registry) {
  RowResult r;
  r.row = &row;
  auto toks = split_args(row.input, registry);
  if (toks.size() != 1 || toks[0].kind != ArgToken::Kind::Known) {
    r.message = "input is not a single known clause";
    return r;
  }
  auto text = render_clause(registry.clause_kind(toks[0].alias->kind), *row.context, toks[0].inner);
  if (text) r.actual.push_back(*text);
  r.pass = row.expected.empty() ? !text : text && strip_ws(*text) == strip_ws(row.expected[0]);
  if (!r.pass) r.message = "output differs";
  return r;
}

}  // namespace

std::vector<MappingRow> load_rows(std::string_view text) {
  std::vector<MappingRow> rows;
  std::string group;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::MalformedRowFile, "row file line " + std::to_string(lineno) + ": " + why,
                  SourceLocation{0, lineno, 1});
    };
    auto sp = line.find_first_of(" \t");
    std::string head = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
    if (head == "group") {
      if (rest.empty()) fail("group needs a name");
      group = rest;
      continue;
    }
    if (head != "row" && head != "clause") fail("unknown record '" + head + "'");
    auto fields = split_top(rest, '|');
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty())
      fail("expected '" + head + " <targets> | <input> | ...'");
    std::vector<std::string> expected(fields.begin() + 2, fields.end());
    if (expected.size() == 1 && expected[0].empty()) expected.clear();
    for (const auto& e : expected)
      if (e.empty()) fail("empty expected field");
    if (head == "clause") {
      if (expected.size() > 1) fail("a clause record has one expected field");
      for (RenderContext c : parse_contexts(fields[0], lineno))
        rows.push_back({fields[1], Backend::Fallback, c, expected, group, lineno});
      continue;
    }
    for (Backend b : parse_backends(fields[0], lineno))
      rows.push_back({fields[1], b, std::nullopt, expected, group, lineno});
  }
  return rows;
}

bool line_matches(std::string_view expected, const PragmaLine& actual) {
  std::string head = actual.construct + actual.attached;
  if (!actual.suffix.empty()) head += " " + actual.suffix;
  auto head_words = split_top(head, 0);
  auto exp = split_top(expected, 0);
  if (exp.size() < head_words.size()) return false;
  for (std::size_t i = 0; i < head_words.size(); ++i)
    if (strip_ws(exp[i]) != strip_ws(head_words[i])) return false;
  std::vector<std::string> want;
  for (std::size_t i = head_words.size(); i < exp.size(); ++i) want.push_back(strip_ws(exp[i]));
  std::vector<std::string> got;
  for (const auto& c : actual.clauses) got.push_back(strip_ws(c));
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  return want == got;
}

ConformanceReport verify_all(const std::vector<MappingRow>& rows, const Registry& registry) {
  ConformanceReport report;
  for (const auto& row : rows) {
    if (row.context) {
      auto r = check_clause(row, registry);
      (r.pass ? report.passed : report.failed)++;
      report.results.push_back(std::move(r));
      continue;
    }
    RowResult r;
    r.row = &row;
    try {
      auto segs = scan(row.input, registry);
      const DirectiveInvocation* inv = nullptr;
      std::size_t count = 0;
      for (const auto& s : segs)
        if (s.invocation) {
          inv = &*s.invocation;
          ++count;
        }
      if (count != 1) {
        r.message = "input is not a single directive invocation";
      } else {
        auto plan = lower(*inv, row.backend, registry);
        for (const auto& p : plan.pragmas) r.actual.push_back(p.text());
        r.pass = plan.pragmas.size() == row.expected.size();
        for (std::size_t i = 0; r.pass && i < row.expected.size(); ++i)
          r.pass = line_matches(row.expected[i], plan.pragmas[i]);
        if (!r.pass) r.message = "output differs";
      }
    } catch (const Error& e) {
      r.message = e.what();
    }
    (r.pass ? report.passed : report.failed)++;
    report.results.push_back(std::move(r));
  }
  return report;
}

std::string ConformanceReport::format() const {
  std::string out;
  auto list = [](const std::vector<std::string>& v) {
    if (v.empty()) return std::string("(nothing)");
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " | ") + x;
    return s;
  };
  for (const auto& r : results) {
    if (r.pass) continue;
    auto where = r.row->context ? to_string(*r.row->context) : to_string(r.row->backend);
    out += "FAIL line " + std::to_string(r.row->line) + " [" + std::string(where) + "] " + r.row->input + "\n";
    out += "  expected: " + list(r.row->expected) + "\n";
    out += "  actual:   " + list(r.actual) + "\n";
    if (!r.message.empty()) out += "  " + r.message + "\n";
  }
  out += std::to_string(passed) + "/" + std::to_string(results.size()) + " rows passed\n";
  return out;
}

}  // namespace unioffload
