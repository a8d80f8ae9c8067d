// SPDX-License-Identifier: Apache-2.0
#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "unioffload/bundled.hpp"
#include "unioffload/cli.hpp"
#include "unioffload/conformance.hpp"
#include "unioffload/rewriter.hpp"

namespace checks {

using namespace unioffload;

namespace {

constexpr std::size_t kKeepFailures = 5;

// The Listing 1 macro switches that select each offloading backend.
const std::map<Backend, std::set<std::string>> kSwitches = {
    {Backend::AccKernels, {"OFFLOAD_BY_OPENACC", "OFFLOAD_BY_OPENACC_KERNELS"}},
    {Backend::AccParallel, {"OFFLOAD_BY_OPENACC"}},
    {Backend::OmpLoop, {"OFFLOAD_BY_OPENMP_TARGET", "OFFLOAD_BY_OPENMP_TARGET_LOOP"}},
    {Backend::OmpDistribute, {"OFFLOAD_BY_OPENMP_TARGET"}},
};

// `expected` as construct words followed by clauses in any order.
bool same_line(const std::string& expected, const PragmaLine& actual) {
  auto want = oracle::words(expected);
  auto got = oracle::words(actual.text());
  auto head = oracle::words(actual.construct + actual.attached);
  if (want.size() < head.size() || !std::equal(head.begin(), head.end(), want.begin())) return false;
  for (auto* v : {&want, &got}) {
    for (auto& w : *v) w = oracle::strip_ws(w);
    std::sort(v->begin(), v->end());
  }
  return want == got;
}

std::string show(const LoweringPlan& plan) {
  std::string s = "[";
  for (const auto& p : plan.pragmas) s += (s.size() > 1 ? " | " : "") + p.text();
  return s + "]";
}

// First-loop pragmas of the branch listing under `defines`.
std::vector<std::string> branch_for(const std::set<std::string>& defines) {
  auto lines = oracle::preprocess(oracle::read_fixture("branches.c"), defines);
  auto loop = std::find_if(lines.begin(), lines.end(),
                           [](const std::string& l) { return l.find("for (") != std::string::npos; });
  return oracle::pragma_lines(std::vector<std::string>(lines.begin(), loop));
}

std::vector<const DirectiveInvocation*> invocations(const std::vector<SourceSegment>& segs) {
  std::vector<const DirectiveInvocation*> out;
  for (const auto& s : segs)
    if (s.invocation) out.push_back(&*s.invocation);
  return out;
}

RenderContext line_context(const PragmaLine& line, Backend b) {
  if (line.construct.rfind("acc", 0) == 0) return RenderContext::Acc;
  return is_omp_offload(b) ? RenderContext::Omp : RenderContext::Fallback;
}

DirectiveInvocation parse_one(const std::string& text, const Registry& reg) {
  auto segs = scan(text, reg);
  return *segs.at(0).invocation;
}

}  // namespace

void Verdict::fail(std::string what) {
  pass = false;
  if (failures.size() < kKeepFailures) failures.push_back(std::move(what));
}

std::string dedup_violation(const LoweringPlan& plan) {
  for (const auto& p : plan.pragmas) {
    std::set<std::string> seen;
    auto cw = oracle::words(p.construct);
    if (!p.suffix.empty() && !cw.empty() && cw.back() == p.suffix) return "suffix repeats construct: " + p.text();
    std::vector<std::string> all = p.clauses;
    if (!p.suffix.empty()) all.push_back(p.suffix);
    for (const auto& c : all)
      if (!seen.insert(oracle::clause_keyword(c)).second) return "keyword twice: " + p.text();
  }
  return {};
}

std::string suffix_violation(const LoweringPlan& plan) {
  for (const auto& p : plan.pragmas) {
    auto w = oracle::words(p.text());
    std::size_t c = oracle::words(p.construct + p.attached).size();
    for (std::size_t i = c; i < w.size(); ++i)
      if ((w[i] == "simd" || w[i] == p.suffix) && i != c) return "suffix not adjacent: " + p.text();
    if (!p.suffix.empty() && (w.size() <= c || w[c] != p.suffix)) return "suffix missing: " + p.text();
  }
  return {};
}

std::string drop_violation(const DirectiveInvocation& inv, Backend backend, const LoweringPlan& plan,
                           const Registry& reg) {
  auto reported = [&](const std::string& source) {
    return std::any_of(plan.dropped.begin(), plan.dropped.end(),
                       [&](const DroppedClause& d) { return d.source == source && !d.implicit; });
  };
  auto rendered = [&](const ClauseKind& kind, const std::string& args) {
    for (const auto& p : plan.pragmas) {
      auto text = render_clause(kind, line_context(p, backend), args);
      if (!text) continue;
      std::string t = oracle::strip_ws(*text);
      if (oracle::strip_ws(p.attached) == t || oracle::strip_ws(p.suffix) == t) return true;
      for (const auto& c : p.clauses)
        if (oracle::strip_ws(c) == t) return true;
    }
    return false;
  };
  const auto& dk = reg.directive_kind(inv.alias->kind);
  if (dk.payload) {
    if (!rendered(reg.clause_kind(dk.payload->clause), inv.args_text) && !reported(inv.alias->name))
      return "payload of " + inv.alias->name + " neither rendered nor reported";
    return {};
  }
  for (const auto& a : inv.args) {
    if (a.kind != ArgToken::Kind::Known) continue;
    if (!rendered(reg.clause_kind(a.alias->kind), a.inner) && !reported(a.alias->name))
      return a.text + " neither rendered nor reported";
  }
  return {};
}

Verdict table_conformance() {
  Verdict v;
  auto start = std::chrono::steady_clock::now();
  auto reg = Registry::load(bundled_registry_text());
  auto rows = load_rows(bundled_rows_text());
  auto report = verify_all(rows, reg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::set<std::string> inputs;
  for (const auto& r : rows) inputs.insert(r.input);
  for (const auto& r : report.results)
    if (!r.pass) v.fail("line " + std::to_string(r.row->line) + ": " + r.row->input + " " + r.message);
  if (secs >= 5.0) v.fail("took " + std::to_string(secs) + " s");
  if (rows.size() < 400 || inputs.size() < 150) v.fail("row file too small");
  std::ostringstream d;
  d << report.passed << "/" << rows.size() << " rows, " << inputs.size() << " distinct inputs, " << secs << " s";
  v.detail = d.str();
  return v;
}

Verdict split_example() {
  Verdict v;
  const auto& reg = Registry::bundled();
  auto inv = parse_one("OFFLOAD(NUM_THREADS(128), COLLAPSE(3))", reg);
  auto acc = lower(inv, Backend::AccKernels, reg);
  if (acc.pragmas.size() != 2 || !same_line("acc kernels vector_length(128)", acc.pragmas[0]) ||
      !same_line("acc loop collapse(3)", acc.pragmas[1]))
    v.fail("acc-kernels gave " + show(acc));
  auto omp = lower(inv, Backend::OmpLoop, reg);
  if (omp.pragmas.size() != 1 || omp.pragmas[0].construct != "omp target teams loop" ||
      !same_line("omp target teams loop collapse(3) thread_limit(128)", omp.pragmas[0]))
    v.fail("omp-loop gave " + show(omp));
  v.detail = "acc-kernels " + show(acc) + ", omp-loop " + show(omp);
  return v;
}

Verdict listing_equivalence() {
  Verdict v;
  const auto& reg = Registry::bundled();
  const auto annotated = oracle::read_fixture("nbody.c");
  const auto bare = oracle::read_fixture("macro_branches.c");
  int matched = 0;
  for (const auto& [backend, defines] : kSwitches) {
    auto want = branch_for(defines);
    TranspileConfig cfg;
    cfg.backend = backend;

    // Bare OFFLOAD(): the branch itself, modulo whitespace.
    auto plain = transpile(bare, cfg, reg);
    auto got = oracle::pragma_lines(plain.output);
    got.resize(std::min(got.size(), want.size()));
    bool bare_ok = plain.ok && oracle::pragma_lines(plain.output).size() == 2 * want.size();
    for (std::size_t i = 0; bare_ok && i < want.size(); ++i)
      bare_ok = oracle::strip_ws(got[i]) == oracle::strip_ws(want[i]);

    // Annotated loop: the branch's construct words lead each emitted line; the
    // rest are the clauses lowered from the invocation's arguments.
    auto res = transpile(annotated, cfg, reg);
    auto lines = oracle::pragma_lines(res.output);
    bool seq = std::find_if(lines.begin(), lines.end(), [](const std::string& l) {
                 return oracle::strip_ws(l) == "#pragmaaccloopseq";
               }) != lines.end();
    bool ann_ok = res.ok && lines.size() >= want.size();
    for (std::size_t i = 0; ann_ok && i < want.size(); ++i) {
      auto w = oracle::words(want[i]);
      auto g = oracle::words(lines[i]);
      ann_ok = g.size() >= w.size() && std::equal(w.begin(), w.end(), g.begin());
    }
    bool seq_ok = is_acc(backend) ? seq && lines.size() == want.size() + 1 : !seq && lines.size() == want.size();
    if (bare_ok && ann_ok && seq_ok) ++matched;
    else
      v.fail(std::string(to_string(backend)) + (bare_ok ? "" : " bare-mismatch") + (ann_ok ? "" : " annotated-mismatch") +
             (seq_ok ? "" : " seq-placement"));
  }
  v.detail = std::to_string(matched) + "/4 backends reproduce their branch";
  return v;
}

Verdict flag_truth_table() {
  Verdict v;
  const std::string input = oracle::read_fixture("macro_branches.c");
  struct Row {
    std::vector<std::string> flags;
    std::vector<std::string> expected;
    bool warns;
  };
  const std::vector<Row> table = {
      {{"--acc"}, branch_for(kSwitches.at(Backend::AccKernels)), false},
      {{"--acc", "--acc-parallel"}, branch_for(kSwitches.at(Backend::AccParallel)), false},
      {{"--omp-target"}, branch_for(kSwitches.at(Backend::OmpLoop)), false},
      {{"--omp-target", "--omp-distribute"}, branch_for(kSwitches.at(Backend::OmpDistribute)), false},
      {{"--acc", "--omp-target"}, branch_for(kSwitches.at(Backend::AccKernels)), true},
      {{}, {"#pragma omp parallel for"}, false},
  };
  int matched = 0;
  for (const auto& row : table) {
    std::vector<std::string> argv = {"unioffload", "transpile"};
    argv.insert(argv.end(), row.flags.begin(), row.flags.end());
    argv.push_back("-");
    std::istringstream in(input);
    std::ostringstream out, err;
    int rc = cli::run(argv, out, err, in);
    auto got = oracle::pragma_lines(out.str());
    bool ok = rc == 0 && got.size() == 2 * row.expected.size();
    for (std::size_t i = 0; ok && i < got.size(); ++i)
      ok = oracle::strip_ws(got[i]) == oracle::strip_ws(row.expected[i % row.expected.size()]);
    ok = ok && (err.str().find("warning") != std::string::npos) == row.warns;
    std::string name;
    for (const auto& f : row.flags) name += (name.empty() ? "" : " ") + f;
    if (ok) ++matched;
    else v.fail("flags '" + name + "' rc=" + std::to_string(rc) + " stderr=" + err.str());
  }
  v.detail = std::to_string(matched) + "/6 flag combinations";
  return v;
}

Verdict property_suite(std::size_t cases, unsigned seed) {
  Verdict v;
  const auto& reg = Registry::bundled();
  oracle::Rng rng(seed);
  std::size_t lowerings = 0, triplet_checks = 0;

  for (std::size_t n = 0; n < cases; ++n) {
    // Verbatim round-trip on invocation-free text.
    auto plain = oracle::random_plain_source(rng, reg);
    std::string joined;
    for (const auto& s : scan(plain, reg)) joined += s.text;
    TranspileConfig pc;
    pc.backend = kAllBackends[n % 5];
    auto pr = transpile(plain, pc, reg);
    if (joined != plain || !pr.ok || pr.output != plain || !pr.diagnostics.empty())
      v.fail("round-trip: " + plain);

    auto src = oracle::random_source(rng, reg);
    auto segs = scan(src, reg);
    for (Backend b : kAllBackends) {
      for (const auto* inv : invocations(segs)) {
        auto plan = lower(*inv, b, reg);
        ++lowerings;
        for (const auto& msg : {dedup_violation(plan), suffix_violation(plan), drop_violation(*inv, b, plan, reg)})
          if (!msg.empty()) v.fail(std::string(to_string(b)) + ": " + msg);
        for (const auto& p : plan.pragmas)
          if (is_acc(b) ? p.construct.rfind("omp target", 0) == 0 : p.construct.rfind("acc", 0) == 0)
            v.fail(std::string(to_string(b)) + " emitted foreign '" + p.text() + "'");
      }
      TranspileConfig cfg;
      cfg.backend = b;
      cfg.style = n % 3 == 0 ? PragmaStyle::Underscore : PragmaStyle::Hash;
      cfg.keep_directive_comment = n % 7 == 0;
      auto first = transpile(src, cfg, reg);
      auto second = transpile(src, cfg, reg);
      if (!first.ok) {
        v.fail("transpile failed: " + src);
        continue;
      }
      if (first.output != second.output || first.diagnostics.size() != second.diagnostics.size())
        v.fail("nondeterministic: " + src);
      auto again = transpile(first.output, cfg, reg);
      if (!again.ok || again.output != first.output) v.fail("not idempotent on " + std::string(to_string(b)) + ": " + src);
    }
  }

  // Cross-notation agreement: aliases sharing a kind lower identically.
  std::map<std::string, std::vector<const DirectiveAlias*>> dgroups;
  for (const auto& d : reg.directives()) dgroups[d.kind].push_back(&d);
  std::map<std::string, std::vector<const ClauseAlias*>> cgroups;
  for (const auto& c : reg.clauses()) cgroups[c.kind].push_back(&c);

  auto call = [&](const DirectiveAlias& d, const std::string& args) {
    if (d.arity == DirectiveArity::NoArgs) return d.name;
    return d.name + "(" + args + ")";
  };
  for (const auto& [kind, group] : dgroups) {
    if (group.size() < 2) continue;
    bool payload = reg.directive_kind(kind).payload.has_value();
    bool bare = std::any_of(group.begin(), group.end(),
                            [](const DirectiveAlias* d) { return d->arity == DirectiveArity::NoArgs; });
    for (int t = 0; t < 4; ++t) {
      std::string args;
      if (!bare) {
        auto inv = oracle::random_invocation(rng, reg);  // borrow a random clause list
        auto open = inv.find('(');
        if (payload) args = "x, a[0:n]";
        else if (open != std::string::npos && !reg.directive_kind(reg.resolve_directive(inv.substr(0, open))->kind).payload)
          args = inv.substr(open + 1, inv.size() - open - 2);
      }
      for (Backend b : kAllBackends) {
        auto ref = lower(parse_one(call(*group[0], args), reg), b, reg);
        for (std::size_t i = 1; i < group.size(); ++i) {
          auto other = lower(parse_one(call(*group[i], args), reg), b, reg);
          ++triplet_checks;
          if (other.pragmas != ref.pragmas)
            v.fail(group[0]->name + " vs " + group[i]->name + " on " + std::string(to_string(b)) + " with (" + args + ")");
        }
      }
    }
  }
  for (const auto& [kind, group] : cgroups) {
    if (group.size() < 2) continue;
    bool all_take_args = std::none_of(group.begin(), group.end(),
                                      [](const ClauseAlias* c) { return c->arity == ClauseArity::NoArgs; });
    std::vector<std::string> tokens;
    for (const auto* c : group) {
      if (all_take_args) tokens.push_back(c->name + "(x)");
      else if (c->arity == ClauseArity::NoArgs) tokens.push_back(c->name);
      else if (c->arity == ClauseArity::OptionalArgs) tokens.push_back(c->name + "()");
    }
    for (const auto& host : reg.directives()) {
      if (host.arity == DirectiveArity::NoArgs || reg.directive_kind(host.kind).payload) continue;
      for (Backend b : kAllBackends) {
        auto ref = lower(parse_one(host.name + "(" + tokens[0] + ")", reg), b, reg);
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          auto other = lower(parse_one(host.name + "(" + tokens[i] + ")", reg), b, reg);
          ++triplet_checks;
          if (other.pragmas != ref.pragmas)
            v.fail(host.name + ": " + tokens[0] + " vs " + tokens[i] + " on " + std::string(to_string(b)));
        }
      }
    }
  }

  std::ostringstream d;
  d << cases << " cases, " << lowerings << " lowerings, " << triplet_checks << " cross-notation comparisons";
  v.detail = d.str();
  return v;
}

Verdict parser_oracle(std::size_t cases, unsigned seed) {
  Verdict v;
  const auto& reg = Registry::bundled();
  oracle::Rng rng(seed);
  std::size_t pieces = 0;
  for (std::size_t n = 0; n < cases; ++n) {
    auto text = oracle::random_arg_list(rng);
    auto want = oracle::brute_split(text);
    auto got = split_args(text, reg);
    bool same = want.size() == got.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i].text == want[i];
    pieces += got.size();
    if (!same) v.fail("'" + text + "'");
  }
  v.detail = std::to_string(cases) + " lists, " + std::to_string(pieces) + " pieces";
  return v;
}

}  // namespace checks
