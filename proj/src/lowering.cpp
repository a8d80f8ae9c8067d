// SPDX-License-Identifier: Apache-2.0
#include "unioffload/lowering.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>

namespace unioffload {

namespace {

std::string_view trim(std::string_view s) {
  auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::string leading_identifier(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && (std::isalnum(static_cast<unsigned char>(s[n])) || s[n] == '_')) ++n;
  if (n == 0 || std::isdigit(static_cast<unsigned char>(s[0]))) return {};
  return std::string(s.substr(0, n));
}

// Substitutes `args` into a clause template. Empty arguments collapse
// "name($ARGS)" to "name" and "order($ARGS concurrent)" to
// "order(concurrent)"; any other template needs arguments (nullopt).
std::optional<std::string> instantiate(const std::string& tmpl, std::string_view args) {
  auto at = tmpl.find("$ARGS");
  if (at == std::string::npos) return tmpl;
  if (!args.empty()) return tmpl.substr(0, at) + std::string(args) + tmpl.substr(at + 5);
  std::string head = tmpl.substr(0, at);
  std::string tail = tmpl.substr(at + 5);
  if (!head.empty() && head.back() == '(' && tail == ")") {
    head.pop_back();
    if (head.empty()) return std::nullopt;  // bare "($ARGS)"
    return head;
  }
  if (!head.empty() && head.back() == '(' && tail.size() > 1 && tail.front() == ' ')
    return head + tail.substr(1);
  return std::nullopt;
}

struct Item {
  const ClauseKind* kind = nullptr;  // null for passthrough tokens
  std::string args;
  std::string source;  // alias name or raw token text
  SourceLocation loc;
  bool implicit = false;
};

struct Line {
  const LineRecipe* recipe;
  RenderContext ctx;
  PragmaLine out;
  std::map<std::string, std::string> seen;  // keyword -> rendered text
};

RenderContext context_of(const Primitive& p, Backend b) {
  if (p.acc) return RenderContext::Acc;
  return is_omp_offload(b) ? RenderContext::Omp : RenderContext::Fallback;
}

std::string construct_text(const LineRecipe& r, const Registry& reg) {
  std::string s = reg.primitive(r.primitives.front()).acc ? "acc" : "omp";
  for (const auto& id : r.primitives) {
    const auto& text = reg.primitive(id).text;
    if (!text.empty()) s += " " + text;
  }
  return s;
}

bool fits(const Line& line, const ClauseKind& kind, const ClauseTemplate& t, const Registry& reg) {
  if (t.suffix) return reg.applicable(line.recipe->primitives.back(), kind.id);
  for (const auto& p : line.recipe->primitives)
    if (reg.applicable(p, kind.id)) return true;
  return false;
}

}  // namespace

std::string PragmaLine::text() const {
  std::string s = construct + attached;
  if (!suffix.empty()) s += " " + suffix;
  for (const auto& c : clauses) s += " " + c;
  return s;
}

LoweringPlan lower(const DirectiveInvocation& inv, Backend backend, const Registry& reg,
                   const LowerOptions& options) {
  LoweringPlan plan;
  const DirectiveKind& dk = reg.directive_kind(inv.alias->kind);

  // Classify the arguments first so that errors do not depend on the backend.
  std::vector<Item> user;
  std::optional<Item> payload;
  if (dk.payload) {
    Item it;
    it.kind = &reg.clause_kind(dk.payload->clause);
    it.args = std::string(trim(inv.args_text));
    it.source = inv.alias->name;
    it.loc = inv.args_loc;
    payload = it;
  } else {
    for (const auto& tok : inv.args) {
      if (tok.kind == ArgToken::Kind::Known) {
        if (tok.alias->arity == ClauseArity::RequiredArgs && trim(tok.inner).empty())
          throw Error(ErrorCode::ArityMismatch, tok.alias->name + " requires arguments", tok.loc);
        user.push_back({&reg.clause_kind(tok.alias->kind), tok.inner, tok.alias->name, tok.loc, false});
        continue;
      }
      auto ident = leading_identifier(tok.text);
      if (const ClauseAlias* ca = ident.empty() ? nullptr : reg.resolve_clause(ident)) {
        std::string what = ca->arity == ClauseArity::NoArgs ? " takes no arguments"
                                                            : " expects a parenthesized argument list";
        throw Error(ErrorCode::ArityMismatch, ca->name + what, tok.loc);
      }
      if (options.passthrough == Passthrough::Off || tok.text.empty())
        throw Error(ErrorCode::UnknownClause,
                    tok.text.empty() ? std::string("empty argument in ") + inv.alias->name
                                     : "unknown clause '" + tok.text + "' in " + inv.alias->name,
                    tok.loc);
      user.push_back({nullptr, {}, tok.text, tok.loc, false});
    }
  }

  if (!inv.alias->warning[static_cast<int>(backend)].empty())
    plan.warnings.push_back({Level::Warning, inv.loc, inv.alias->warning[static_cast<int>(backend)]});

  for (std::size_t i = 1; i < user.size(); ++i)
    if (user[i].kind && user[i].kind->id == "Independent") {
      plan.warnings.push_back({Level::Warning, user[i].loc,
                               user[i].source + " is not the first argument; the macro form requires it first"});
      break;
    }

  std::vector<std::string> implicit;
  const Lowering* low = &reg.lowering(dk.id, backend);
  for (int depth = 0; low->kind == Lowering::Kind::Delegate; ++depth) {
    if (depth > 32) throw Error(ErrorCode::DanglingCanonicalId, "delegation cycle at " + dk.id);
    implicit.insert(implicit.end(), low->implicit.begin(), low->implicit.end());
    low = &reg.lowering(low->target, backend);
  }
  implicit.insert(implicit.end(), low->implicit.begin(), low->implicit.end());

  auto drop = [&](const Item& it, std::string reason) {
    plan.dropped.push_back({it.kind ? it.kind->id : it.source, it.implicit ? "" : it.source,
                            std::move(reason), it.implicit, it.loc});
  };

  if (low->kind == Lowering::Kind::Drop) {
    std::string reason = "directive has no counterpart on " + std::string(to_string(backend));
    if (payload) drop(*payload, reason);
    for (const auto& it : user) drop(it, reason);
    return plan;
  }

  std::vector<Line> lines;
  for (const auto& r : low->lines) {
    Line l{&r, context_of(reg.primitive(r.primitives.front()), backend), {}, {}};
    l.out.construct = construct_text(r, reg);
    lines.push_back(std::move(l));
  }

  if (payload) {
    Line& l = lines.front();
    const auto& t = payload->kind->in(l.ctx);
    auto text = t.absent ? std::nullopt : instantiate(t.text, payload->args);
    if (t.absent) {
      drop(*payload, "no counterpart in " + std::string(to_string(l.ctx)) + " context");
    } else if (!text) {
      drop(*payload, "requires arguments");
    } else if (dk.payload->attached) {
      l.out.attached = *text;
      l.seen[t.keyword] = *text;
    } else {
      l.out.clauses.push_back(*text);
      l.seen[t.keyword] = *text;
    }
  }

  std::vector<Item> items;
  for (const auto& id : implicit) {
    Item it;
    it.kind = &reg.clause_kind(id);
    it.source = id;
    it.loc = inv.loc;
    it.implicit = true;
    items.push_back(std::move(it));
  }
  items.insert(items.end(), user.begin(), user.end());

  for (const auto& it : items) {
    if (!it.kind) {
      LineRole want = options.passthrough == Passthrough::Launch ? LineRole::Launch : LineRole::Loop;
      Line* target = want == LineRole::Launch ? &lines.front() : &lines.back();
      for (auto& l : lines)
        if (l.recipe->role == want) target = &l;
      target->out.clauses.push_back(it.source);
      plan.warnings.push_back({Level::Warning, it.loc,
                               "unknown argument '" + it.source + "' passed through verbatim"});
      continue;
    }
    std::vector<Line*> candidates;
    bool any_render = false;
    for (auto& l : lines) {
      const auto& t = it.kind->in(l.ctx);
      if (t.absent) continue;
      any_render = true;
      if (fits(l, *it.kind, t, reg)) candidates.push_back(&l);
    }
    if (!any_render) {
      drop(it, "no counterpart on " + std::string(to_string(backend)));
      continue;
    }
    if (candidates.empty()) {
      const auto& t = it.kind->in(lines.back().ctx);
      drop(it, "not applicable to '" + lines.back().out.construct + "'");
      if (t.suffix && !it.implicit)
        plan.warnings.push_back({Level::Warning, it.loc,
                                 "'" + t.text + "' cannot extend '" + lines.back().out.construct +
                                     "'; " + it.source + " dropped"});
      continue;
    }
    Line* target = candidates.front();
    if (candidates.size() > 1 && it.kind->split) {
      for (auto* c : candidates)
        if (c->recipe->role == *it.kind->split) target = c;
    }
    const auto& t = it.kind->in(target->ctx);
    auto text = render_clause(*it.kind, target->ctx, it.args);
    if (!text) {
      drop(it, "requires arguments");
      continue;
    }
    auto seen = target->seen.find(t.keyword);
    if (seen != target->seen.end()) {
      drop(it, "duplicate");
      if (seen->second != *text)
        plan.warnings.push_back({Level::Warning, it.loc,
                                 "'" + *text + "' conflicts with earlier '" + seen->second + "'; keeping the first"});
      continue;
    }
    target->seen.emplace(t.keyword, *text);
    if (t.suffix)
      target->out.suffix = *text;
    else
      target->out.clauses.push_back(*text);
  }

  for (auto& l : lines) plan.pragmas.push_back(std::move(l.out));
  return plan;
}

std::optional<std::string> render_clause(const ClauseKind& kind, RenderContext ctx, std::string_view args) {
  const auto& t = kind.in(ctx);
  if (t.absent) return std::nullopt;
  if (t.suffix) return t.text;
  return instantiate(t.text, trim(args));
}

LoweringPlan lower_acc_alias_on_fallback(const DirectiveInvocation& inv, const Registry& registry,
                                         const LowerOptions& options) {
  if (inv.alias->notation != Notation::AccLike)
    throw std::invalid_argument(inv.alias->name + " is not an OpenACC-like alias");
  // The registry fills the fallback slot of OpenACC-only kinds from their
  // OpenMP-backend lowering, so the ordinary path follows the chain.
  return lower(inv, Backend::Fallback, registry, options);
}

std::string render_line(const PragmaLine& line, PragmaStyle style) {
  std::string text = line.text();
  if (style == PragmaStyle::Hash) return "#pragma " + text;
  std::string out = "_Pragma(\"";
  for (char c : text) {
    if (c == '\\' || c == '"') out += '\\';
    out += c;
  }
  return out + "\")";
}

std::string render(const LoweringPlan& plan, PragmaStyle style) {
  std::string out;
  for (const auto& p : plan.pragmas) {
    if (!out.empty()) out += style == PragmaStyle::Hash ? "\n" : " ";
    out += render_line(p, style);
  }
  return out;
}

}  // namespace unioffload
