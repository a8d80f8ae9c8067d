// SPDX-License-Identifier: Apache-2.0
#include "unioffload/rewriter.hpp"

#include "unioffload/parser.hpp"

namespace unioffload {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

std::string trim(std::string_view s) {
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool gap = false;
  for (char c : s) {
    if (is_ws(c)) {
      gap = !out.empty();
      continue;
    }
    if (gap) out += ' ';
    gap = false;
    out += c;
  }
  return out;
}

std::string invocation_text(const DirectiveInvocation& inv) {
  std::string s = inv.alias->name;
  if (inv.has_parens) s += "(" + collapse_ws(inv.args_text) + ")";
  return s;
}

std::string newline_style(std::string_view source) {
  auto nl = source.find('\n');
  if (nl != std::string_view::npos && nl > 0 && source[nl - 1] == '\r') return "\r\n";
  return "\n";
}

std::string replace(const DirectiveInvocation& inv, const LoweringPlan& plan,
                    const TranspileConfig& config, const std::string& eol) {
  std::vector<std::string> lines;
  if (!plan.pragmas.empty()) {
    if (config.style == PragmaStyle::Hash) {
      for (const auto& p : plan.pragmas) lines.push_back(inv.indent + render_line(p, config.style));
    } else {
      lines.push_back(inv.indent + render(plan, config.style));
    }
  }
  std::string trailing = trim(inv.trailing_text);
  std::string trailing_line;
  if (!trailing.empty()) {
    bool comment = trailing.rfind("//", 0) == 0;
    if (!lines.empty() && (comment || config.style == PragmaStyle::Underscore))
      lines.back() += " " + trailing;
    else
      trailing_line = inv.indent + trailing;
  }
  if (config.keep_directive_comment) lines.push_back(inv.indent + "// from: " + invocation_text(inv));
  if (!trailing_line.empty()) lines.push_back(trailing_line);

  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += lines[i];
    out += i + 1 < lines.size() ? eol : inv.newline;
  }
  return out;
}

}  // namespace

TranspileResult transpile(std::string_view source, const TranspileConfig& config,
                          const Registry& registry) {
  TranspileResult result;
  std::vector<SourceSegment> segments;
  try {
    segments = scan(source, registry);
  } catch (const Error& e) {
    result.ok = false;
    result.diagnostics.push_back({Level::Error, e.location().value_or(SourceLocation{}), e.what()});
    return result;
  }
  std::string eol = newline_style(source);
  LowerOptions options{config.passthrough};
  for (const auto& seg : segments) {
    if (seg.kind == SourceSegment::Kind::Verbatim) {
      result.output += seg.text;
      continue;
    }
    const auto& inv = *seg.invocation;
    try {
      LoweringPlan plan = lower(inv, config.backend, registry, options);
      for (auto& w : plan.warnings) result.diagnostics.push_back(std::move(w));
      for (const auto& d : plan.dropped) {
        if (d.implicit) continue;
        result.diagnostics.push_back(
            {Level::Note, d.loc, d.source + " dropped on " + std::string(to_string(config.backend)) + ": " + d.reason});
      }
      result.output += replace(inv, plan, config, eol);
    } catch (const Error& e) {
      result.ok = false;
      result.diagnostics.push_back({Level::Error, e.location().value_or(inv.loc), e.what()});
    }
  }
  if (!result.ok) result.output.clear();
  return result;
}

}  // namespace unioffload
