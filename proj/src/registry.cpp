// SPDX-License-Identifier: Apache-2.0
#include "unioffload/registry.hpp"

#include <algorithm>
#include <set>

#include "unioffload/bundled.hpp"
#include "unioffload/diagnostic.hpp"

namespace unioffload {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::AccKernels: return "acc-kernels";
    case Backend::AccParallel: return "acc-parallel";
    case Backend::OmpLoop: return "omp-loop";
    case Backend::OmpDistribute: return "omp-distribute";
    case Backend::Fallback: return "fallback";
  }
  return "?";
}

std::optional<Backend> parse_backend(std::string_view name) {
  for (Backend b : kAllBackends)
    if (to_string(b) == name) return b;
  return std::nullopt;
}

std::string_view to_string(Notation n) {
  switch (n) {
    case Notation::Intuitive: return "intuitive";
    case Notation::AccLike: return "acc";
    case Notation::OmpLike: return "omp";
  }
  return "?";
}

std::string_view to_string(RenderContext c) {
  switch (c) {
    case RenderContext::Acc: return "acc";
    case RenderContext::Omp: return "omp";
    case RenderContext::Fallback: return "fallback";
  }
  return "?";
}

std::string_view to_string(ClauseArity a) {
  switch (a) {
    case ClauseArity::NoArgs: return "none";
    case ClauseArity::RequiredArgs: return "required";
    case ClauseArity::OptionalArgs: return "optional";
  }
  return "?";
}

std::string template_keyword(std::string_view t) {
  if (t.empty() || t == "-") return {};
  if (t.front() == '+') return std::string(t);
  if (t.front() == '(') return "()";
  auto paren = t.find('(');
  std::string name(t.substr(0, paren));
  if (paren == std::string_view::npos) return name;
  if (name == "map" || name == "if" || name == "depend") {
    auto inner = t.substr(paren + 1);
    auto colon = inner.find(':');
    if (colon != std::string_view::npos) {
      auto mod = inner.substr(0, colon);
      while (!mod.empty() && mod.back() == ' ') mod.remove_suffix(1);
      return name + ":" + std::string(mod);
    }
  }
  return name;
}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Text after the first `n` whitespace-separated fields, trimmed.
std::string rest_after(std::string_view s, int n) {
  std::size_t i = 0;
  for (int k = 0; k < n; ++k) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
  }
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  auto r = s.substr(i);
  while (!r.empty() && (r.back() == ' ' || r.back() == '\t' || r.back() == '\r')) r.remove_suffix(1);
  return std::string(r);
}

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& msg) {
  SourceLocation loc;
  loc.line = line;
  throw Error(code, "registry line " + std::to_string(line) + ": " + msg, loc);
}

std::vector<Backend> parse_backend_set(std::string_view spec, std::size_t line) {
  std::vector<Backend> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto comma = spec.find(',', start);
    auto item = spec.substr(start, comma == std::string_view::npos ? spec.npos : comma - start);
    if (item == "all") {
      out.assign(kAllBackends.begin(), kAllBackends.end());
    } else if (item == "acc") {
      out.push_back(Backend::AccKernels);
      out.push_back(Backend::AccParallel);
    } else if (item == "omp") {
      out.push_back(Backend::OmpLoop);
      out.push_back(Backend::OmpDistribute);
    } else if (auto b = parse_backend(item)) {
      out.push_back(*b);
    } else {
      fail(ErrorCode::MalformedRegistry, line, "unknown backend '" + std::string(item) + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Notation> parse_notation(std::string_view s) {
  if (s == "intuitive") return Notation::Intuitive;
  if (s == "acc") return Notation::AccLike;
  if (s == "omp") return Notation::OmpLike;
  return std::nullopt;
}

ClauseTemplate parse_template(std::string_view t) {
  ClauseTemplate out;
  if (t == "-") return out;
  out.absent = false;
  out.suffix = !t.empty() && t.front() == '+';
  out.text = out.suffix ? std::string(t.substr(1)) : std::string(t);
  out.keyword = template_keyword(t);
  return out;
}

Lowering parse_recipe(const std::vector<std::string>& f, std::size_t first, std::size_t line) {
  Lowering low;
  if (first >= f.size()) fail(ErrorCode::MalformedRegistry, line, "lower record without recipe");
  if (f[first] == "drop") {
    if (f.size() != first + 1) fail(ErrorCode::MalformedRegistry, line, "junk after 'drop'");
    low.kind = Lowering::Kind::Drop;
    return low;
  }
  std::size_t i = first;
  if (f[i] == "=>") {
    if (i + 1 >= f.size()) fail(ErrorCode::MalformedRegistry, line, "'=>' without target");
    low.kind = Lowering::Kind::Delegate;
    low.target = f[i + 1];
    for (i += 2; i < f.size(); ++i) {
      if (f[i].size() < 2 || f[i][0] != '+')
        fail(ErrorCode::MalformedRegistry, line, "expected +Clause after delegate, got '" + f[i] + "'");
      low.implicit.push_back(f[i].substr(1));
    }
    return low;
  }
  low.kind = Lowering::Kind::Lines;
  low.lines.emplace_back();
  for (; i < f.size(); ++i) {
    const std::string& tok = f[i];
    if (tok == "|") {
      low.lines.emplace_back();
    } else if (tok == "launch:" || tok == "loop:") {
      if (!low.lines.back().primitives.empty())
        fail(ErrorCode::MalformedRegistry, line, "line role must precede primitives");
      low.lines.back().role = tok == "launch:" ? LineRole::Launch : LineRole::Loop;
    } else if (tok[0] == '+' && tok.size() > 1) {
      low.implicit.push_back(tok.substr(1));
    } else {
      low.lines.back().primitives.push_back(tok);
    }
  }
  for (const auto& l : low.lines)
    if (l.primitives.empty()) fail(ErrorCode::MalformedRegistry, line, "empty pragma line in recipe");
  return low;
}

bool same_lowering(const Lowering& a, const Lowering& b) {
  if (a.kind != b.kind || a.target != b.target || a.implicit != b.implicit) return false;
  if (a.lines.size() != b.lines.size()) return false;
  for (std::size_t i = 0; i < a.lines.size(); ++i)
    if (a.lines[i].role != b.lines[i].role || a.lines[i].primitives != b.lines[i].primitives)
      return false;
  return true;
}

}  // namespace

Registry Registry::load(std::string_view text) {
  Registry reg;
  std::set<std::string> alias_names;
  std::map<std::pair<std::string, int>, std::size_t> render_seen;
  struct PendingWarn {
    std::string alias;
    std::vector<Backend> backends;
    std::string message;
    std::size_t line;
  };
  std::vector<PendingWarn> warns;
  std::map<std::string, std::size_t> kind_lines;  // first mention, for diagnostics

  auto dkind = [&](const std::string& id) -> DirectiveKind& {
    auto it = reg.dkind_index_.find(id);
    if (it != reg.dkind_index_.end()) return reg.directive_kinds_[it->second];
    reg.dkind_index_.emplace(id, reg.directive_kinds_.size());
    reg.directive_kinds_.push_back(DirectiveKind{id, {}, std::nullopt});
    return reg.directive_kinds_.back();
  };
  auto ckind = [&](const std::string& id) -> ClauseKind& {
    auto it = reg.ckind_index_.find(id);
    if (it != reg.ckind_index_.end()) return reg.clause_kinds_[it->second];
    reg.ckind_index_.emplace(id, reg.clause_kinds_.size());
    reg.clause_kinds_.push_back(ClauseKind{id, {}, std::nullopt});
    return reg.clause_kinds_.back();
  };

  std::size_t lineno = 0;
  std::size_t pos = 0;
  std::size_t records = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto f = split_ws(raw);
    if (f.empty()) continue;
    ++records;
    const std::string& rec = f[0];
    auto need = [&](std::size_t n) {
      if (f.size() < n) fail(ErrorCode::MalformedRegistry, lineno, "too few fields for '" + rec + "'");
    };

    if (rec == "primitive") {
      need(2);
      const std::string& id = f[1];
      bool acc = id.rfind("acc.", 0) == 0;
      if (!acc && id.rfind("omp.", 0) != 0)
        fail(ErrorCode::MalformedRegistry, lineno, "primitive id must start with acc. or omp.");
      if (reg.prim_index_.count(id)) fail(ErrorCode::MalformedRegistry, lineno, "duplicate primitive " + id);
      std::string words;
      for (std::size_t i = 2; i < f.size(); ++i) words += (i > 2 ? " " : "") + f[i];
      reg.prim_index_.emplace(id, reg.primitives_.size());
      reg.primitives_.push_back(Primitive{id, words, acc});
    } else if (rec == "directive") {
      need(4);
      auto n = parse_notation(f[2]);
      if (!n) fail(ErrorCode::MalformedRegistry, lineno, "unknown notation '" + f[2] + "'");
      DirectiveArity arity = DirectiveArity::VarArgs;
      if (f.size() == 5 && f[4] == "noargs") arity = DirectiveArity::NoArgs;
      else if (f.size() != 4) fail(ErrorCode::MalformedRegistry, lineno, "unexpected fields in directive record");
      if (!alias_names.insert(f[1]).second)
        fail(ErrorCode::DuplicateAlias, lineno, "alias '" + f[1] + "' registered twice");
      reg.directive_index_.emplace(f[1], reg.directives_.size());
      reg.directives_.push_back(DirectiveAlias{f[1], *n, f[3], arity, {}});
      kind_lines.emplace(f[3], lineno);
    } else if (rec == "clause") {
      need(5);
      if (f.size() != 5) fail(ErrorCode::MalformedRegistry, lineno, "unexpected fields in clause record");
      auto n = parse_notation(f[2]);
      if (!n) fail(ErrorCode::MalformedRegistry, lineno, "unknown notation '" + f[2] + "'");
      ClauseArity arity;
      if (f[4] == "none") arity = ClauseArity::NoArgs;
      else if (f[4] == "required") arity = ClauseArity::RequiredArgs;
      else if (f[4] == "optional") arity = ClauseArity::OptionalArgs;
      else fail(ErrorCode::MalformedRegistry, lineno, "unknown arity '" + f[4] + "'");
      if (!alias_names.insert(f[1]).second)
        fail(ErrorCode::DuplicateAlias, lineno, "alias '" + f[1] + "' registered twice");
      reg.clause_index_.emplace(f[1], reg.clauses_.size());
      reg.clauses_.push_back(ClauseAlias{f[1], *n, f[3], arity});
      kind_lines.emplace(f[3], lineno);
    } else if (rec == "render") {
      need(4);
      int ctx;
      if (f[2] == "acc") ctx = 0;
      else if (f[2] == "omp") ctx = 1;
      else if (f[2] == "fallback") ctx = 2;
      else fail(ErrorCode::MalformedRegistry, lineno, "unknown render context '" + f[2] + "'");
      if (!render_seen.emplace(std::make_pair(f[1], ctx), lineno).second)
        fail(ErrorCode::MalformedRegistry, lineno, "duplicate render for " + f[1] + " " + f[2]);
      ckind(f[1]).render[ctx] = parse_template(rest_after(raw, 3));
    } else if (rec == "lower") {
      need(4);
      auto backends = parse_backend_set(f[2], lineno);
      Lowering low = parse_recipe(f, 3, lineno);
      auto& k = dkind(f[1]);
      for (Backend b : backends) {
        auto& slot = k.lower[static_cast<int>(b)];
        if (slot) fail(ErrorCode::MalformedRegistry, lineno, "second lowering of " + f[1] + " on " + std::string(to_string(b)));
        slot = low;
      }
    } else if (rec == "payload") {
      need(3);
      bool attached = f.size() == 4 && f[3] == "attached";
      if (f.size() > 4 || (f.size() == 4 && !attached))
        fail(ErrorCode::MalformedRegistry, lineno, "unexpected fields in payload record");
      auto& k = dkind(f[1]);
      if (k.payload) fail(ErrorCode::MalformedRegistry, lineno, "second payload for " + f[1]);
      k.payload = Payload{f[2], attached};
    } else if (rec == "split") {
      need(3);
      if (f[2] != "launch" && f[2] != "loop")
        fail(ErrorCode::MalformedRegistry, lineno, "split role must be launch or loop");
      auto& k = ckind(f[1]);
      if (k.split) fail(ErrorCode::MalformedRegistry, lineno, "second split record for " + f[1]);
      k.split = f[2] == "launch" ? LineRole::Launch : LineRole::Loop;
    } else if (rec == "warn") {
      need(4);
      warns.push_back(PendingWarn{f[1], parse_backend_set(f[2], lineno), rest_after(raw, 3), lineno});
    } else if (rec == "applic") {
      need(4);
      if (f[3] != "yes" && f[3] != "no") fail(ErrorCode::MalformedRegistry, lineno, "applic flag must be yes or no");
      if (!reg.applic_.emplace(std::make_pair(f[1], f[2]), f[3] == "yes").second)
        fail(ErrorCode::MalformedRegistry, lineno, "duplicate applic " + f[1] + " " + f[2]);
    } else {
      fail(ErrorCode::MalformedRegistry, lineno, "unknown record kind '" + rec + "'");
    }
  }
  if (records == 0 || reg.directives_.empty())
    throw Error(ErrorCode::MalformedRegistry, "registry defines no directives");

  for (auto& w : warns) {
    auto it = reg.directive_index_.find(w.alias);
    if (it == reg.directive_index_.end())
      fail(ErrorCode::DanglingCanonicalId, w.line, "warn record for unknown directive " + w.alias);
    for (Backend b : w.backends) reg.directives_[it->second].warning[static_cast<int>(b)] = w.message;
  }
  for (const auto& ck : reg.clause_kinds_)
    for (int c = 0; c < 3; ++c)
      if (!render_seen.count({ck.id, c}))
        throw Error(ErrorCode::MalformedRegistry,
                    "clause kind " + ck.id + " has no '" +
                        std::string(to_string(static_cast<RenderContext>(c))) + "' render record");
  for (auto& d : reg.directives_)
    if (!reg.dkind_index_.count(d.kind))
      fail(ErrorCode::DanglingCanonicalId, kind_lines[d.kind],
           "directive " + d.name + " refers to " + d.kind + ", which has no lowering");
  for (auto& c : reg.clauses_)
    if (!reg.ckind_index_.count(c.kind))
      fail(ErrorCode::DanglingCanonicalId, kind_lines[c.kind],
           "clause " + c.name + " refers to " + c.kind + ", which has no rendering");
  reg.validate();
  return reg;
}

void Registry::validate() {
  auto err = [](ErrorCode c, const std::string& m) { throw Error(c, m); };

  std::set<std::string> used_prims;
  for (auto& dk : directive_kinds_) {
    for (int b = 0; b < 4; ++b)
      if (!dk.lower[b])
        err(ErrorCode::MalformedRegistry,
            "directive kind " + dk.id + " has no lowering for " + std::string(to_string(kAllBackends[b])));
    if (dk.payload && !ckind_index_.count(dk.payload->clause))
      err(ErrorCode::DanglingCanonicalId, "payload of " + dk.id + " names unknown clause " + dk.payload->clause);
    for (auto& slot : dk.lower) {
      if (!slot) continue;
      for (auto& line : slot->lines)
        for (auto& p : line.primitives) {
          if (!prim_index_.count(p))
            err(ErrorCode::DanglingCanonicalId, "lowering of " + dk.id + " uses unknown primitive " + p);
          used_prims.insert(p);
        }
      for (auto& c : slot->implicit)
        if (!ckind_index_.count(c))
          err(ErrorCode::DanglingCanonicalId, "lowering of " + dk.id + " names unknown clause " + c);
      if (slot->kind == Lowering::Kind::Delegate && !dkind_index_.count(slot->target))
        err(ErrorCode::DanglingCanonicalId, "lowering of " + dk.id + " delegates to unknown " + slot->target);
    }
    if (!dk.lower[4]) {
      const auto& a = *dk.lower[static_cast<int>(Backend::OmpLoop)];
      const auto& b = *dk.lower[static_cast<int>(Backend::OmpDistribute)];
      if (a.kind == Lowering::Kind::Lines || !same_lowering(a, b))
        err(ErrorCode::MalformedRegistry,
            "directive kind " + dk.id + " has no fallback lowering and no usable OpenMP counterpart");
      borrowed_fallback_.emplace(dk.id, a);
    }
  }

  // Delegation chains must terminate.
  for (auto& dk : directive_kinds_) {
    for (Backend b : kAllBackends) {
      std::set<std::string> seen{dk.id};
      const Lowering* low = &lowering(dk.id, b);
      while (low->kind == Lowering::Kind::Delegate) {
        if (!seen.insert(low->target).second)
          err(ErrorCode::MalformedRegistry, "delegation cycle through " + dk.id + " on " + std::string(to_string(b)));
        low = &lowering(low->target, b);
      }
    }
  }

  for (auto& [key, flag] : applic_) {
    (void)flag;
    if (!prim_index_.count(key.first))
      err(ErrorCode::DanglingCanonicalId, "applic record for unknown primitive " + key.first);
    if (!ckind_index_.count(key.second))
      err(ErrorCode::DanglingCanonicalId, "applic record for unknown clause kind " + key.second);
  }
  for (auto& p : used_prims)
    for (auto& ck : clause_kinds_)
      if (!applic_.count({p, ck.id}))
        err(ErrorCode::IncompleteApplicability, "no applicability entry for (" + p + ", " + ck.id + ")");

  // Split lowerings: a clause accepted by both lines needs a preference.
  for (auto& dk : directive_kinds_)
    for (auto& slot : dk.lower) {
      if (!slot || slot->lines.size() < 2) continue;
      for (auto& ck : clause_kinds_) {
        int hits = 0;
        for (auto& line : slot->lines) {
          bool any = false;
          for (auto& p : line.primitives) {
            const auto& prim = primitive(p);
            auto ctx = prim.acc ? RenderContext::Acc : RenderContext::Omp;
            if (!ck.in(ctx).absent && applic_.at({p, ck.id})) any = true;
          }
          hits += any;
        }
        if (hits > 1 && !ck.split)
          err(ErrorCode::IncompleteApplicability,
              "clause kind " + ck.id + " fits both lines of " + dk.id + " but has no split record");
      }
    }
}

const DirectiveAlias* Registry::resolve_directive(std::string_view name) const {
  auto it = directive_index_.find(std::string(name));
  return it == directive_index_.end() ? nullptr : &directives_[it->second];
}

const ClauseAlias* Registry::resolve_clause(std::string_view name) const {
  auto it = clause_index_.find(std::string(name));
  return it == clause_index_.end() ? nullptr : &clauses_[it->second];
}

const DirectiveKind& Registry::directive_kind(std::string_view id) const {
  auto it = dkind_index_.find(std::string(id));
  if (it == dkind_index_.end()) throw Error(ErrorCode::DanglingCanonicalId, "unknown directive kind " + std::string(id));
  return directive_kinds_[it->second];
}

const ClauseKind& Registry::clause_kind(std::string_view id) const {
  auto it = ckind_index_.find(std::string(id));
  if (it == ckind_index_.end()) throw Error(ErrorCode::DanglingCanonicalId, "unknown clause kind " + std::string(id));
  return clause_kinds_[it->second];
}

const Primitive& Registry::primitive(std::string_view id) const {
  auto it = prim_index_.find(std::string(id));
  if (it == prim_index_.end()) throw Error(ErrorCode::DanglingCanonicalId, "unknown primitive " + std::string(id));
  return primitives_[it->second];
}

bool Registry::applicable(std::string_view prim, std::string_view clause) const {
  auto it = applic_.find({std::string(prim), std::string(clause)});
  if (it == applic_.end())
    throw Error(ErrorCode::IncompleteApplicability,
                "no applicability entry for (" + std::string(prim) + ", " + std::string(clause) + ")");
  return it->second;
}

const Lowering& Registry::lowering(std::string_view kind, Backend backend) const {
  const auto& dk = directive_kind(kind);
  if (const auto& slot = dk.on(backend)) return *slot;
  return borrowed_fallback_.at(dk.id);
}

const Registry& Registry::bundled() {
  static const Registry reg = Registry::load(bundled_registry_text());
  return reg;
}

}  // namespace unioffload
