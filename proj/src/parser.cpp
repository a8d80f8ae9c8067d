// SPDX-License-Identifier: Apache-2.0
#include "unioffload/parser.hpp"

#include <algorithm>

namespace unioffload {

namespace {

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }
bool is_space(char c) { return is_blank(c) || c == '\n' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// A quote at t[i] is a digit separator (1'000'000) rather than a character
// literal when it sits inside a token that started with a digit.
bool is_digit_separator(std::string_view t, std::size_t i) {
  std::size_t j = i;
  while (j > 0 && (is_ident_char(t[j - 1]) || t[j - 1] == '\'' || t[j - 1] == '.')) --j;
  return j < i && t[j] >= '0' && t[j] <= '9';
}

// If the '"' at t[i] opens a raw string literal, the length of its prefix
// (R, u8R, uR, UR, LR); otherwise 0.
bool opens_raw_string(std::string_view t, std::size_t i) {
  std::size_t j = i;
  while (j > 0 && is_ident_char(t[j - 1])) --j;
  auto prefix = t.substr(j, i - j);
  return prefix == "R" || prefix == "u8R" || prefix == "uR" || prefix == "UR" || prefix == "LR";
}

// Index just past the literal starting at t[i] ('"' or '\''). Ordinary
// literals stop at an unescaped newline (ill-formed input, recovered).
std::size_t skip_literal(std::string_view t, std::size_t i) {
  char q = t[i];
  if (q == '"' && opens_raw_string(t, i)) {
    auto paren = t.find('(', i + 1);
    if (paren == std::string_view::npos) return t.size();
    std::string close = ")" + std::string(t.substr(i + 1, paren - i - 1)) + "\"";
    auto end = t.find(close, paren + 1);
    return end == std::string_view::npos ? t.size() : end + close.size();
  }
  std::size_t k = i + 1;
  while (k < t.size()) {
    if (t[k] == '\\') {
      k += 2;
      continue;
    }
    if (t[k] == q) return k + 1;
    if (t[k] == '\n') return k;
    ++k;
  }
  return t.size();
}

bool starts_literal(std::string_view t, std::size_t i) {
  return t[i] == '"' || (t[i] == '\'' && !is_digit_separator(t, i));
}

// Lexical state carried from one line to the next.
struct LexState {
  enum class Mode { Code, BlockComment, String, Char, RawString, LineComment };
  Mode mode = Mode::Code;
  std::string raw_close;  // ")delim\"" while in a raw string
  bool pp_continues = false;
};

// Advances `st` over t[b, e), which holds one line without its newline.
void lex_line(std::string_view t, std::size_t b, std::size_t e, LexState& st) {
  using M = LexState::Mode;
  std::size_t i = b;
  while (i < e) {
    char c = t[i];
    switch (st.mode) {
      case M::Code:
        if (c == '/' && i + 1 < e && t[i + 1] == '/') {
          st.mode = M::LineComment;
          i = e;
        } else if (c == '/' && i + 1 < e && t[i + 1] == '*') {
          st.mode = M::BlockComment;
          i += 2;
        } else if (c == '"' && opens_raw_string(t, i)) {
          auto paren = t.find('(', i + 1);
          if (paren == std::string_view::npos || paren >= e) {
            i = e;  // malformed raw string opener; ignore
          } else {
            st.raw_close = ")" + std::string(t.substr(i + 1, paren - i - 1)) + "\"";
            st.mode = M::RawString;
            i = paren + 1;
          }
        } else if (c == '"') {
          st.mode = M::String;
          ++i;
        } else if (c == '\'' && !is_digit_separator(t, i)) {
          st.mode = M::Char;
          ++i;
        } else {
          ++i;
        }
        break;
      case M::BlockComment: {
        auto end = t.substr(0, e).find("*/", i);
        if (end == std::string_view::npos) {
          i = e;
        } else {
          st.mode = M::Code;
          i = end + 2;
        }
        break;
      }
      case M::String:
      case M::Char:
        if (c == '\\') {
          i += 2;
        } else {
          if (c == (st.mode == M::String ? '"' : '\'')) st.mode = M::Code;
          ++i;
        }
        break;
      case M::RawString: {
        auto end = t.substr(0, e).find(st.raw_close, i);
        if (end == std::string_view::npos) {
          i = e;
        } else {
          st.mode = M::Code;
          i = end + st.raw_close.size();
        }
        break;
      }
      case M::LineComment:
        i = e;
        break;
    }
  }
  bool continued = e > b && t[e - 1] == '\\';
  if (!continued && (st.mode == M::LineComment || st.mode == M::String || st.mode == M::Char))
    st.mode = M::Code;
}

// Index of the ')' matching the '(' at t[open], or npos. Gives up at a ';'
// or at a preprocessor line, which cannot be part of an argument list.
std::size_t find_close(std::string_view t, std::size_t open) {
  int depth = 0;
  std::size_t i = open;
  while (i < t.size()) {
    char c = t[i];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) return i;
    } else if (c == ';') {
      return std::string_view::npos;
    } else if (starts_literal(t, i)) {
      i = skip_literal(t, i);
      continue;
    } else if (c == '/' && i + 1 < t.size() && t[i + 1] == '/') {
      auto nl = t.find('\n', i);
      i = nl == std::string_view::npos ? t.size() : nl;
      continue;
    } else if (c == '/' && i + 1 < t.size() && t[i + 1] == '*') {
      auto end = t.find("*/", i + 2);
      if (end == std::string_view::npos) return std::string_view::npos;
      i = end + 2;
      continue;
    } else if (c == '\n') {
      std::size_t k = i + 1;
      while (k < t.size() && is_blank(t[k])) ++k;
      if (k < t.size() && t[k] == '#') return std::string_view::npos;
    }
    ++i;
  }
  return std::string_view::npos;
}

// Index of the ')' closing the '(' at s[open] within s, honoring literals.
std::size_t match_paren(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size();) {
    if (starts_literal(s, i)) {
      i = skip_literal(s, i);
      continue;
    }
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) return i;
    ++i;
  }
  return std::string_view::npos;
}

ArgToken classify(std::string_view piece, std::size_t offset, const Registry& reg) {
  ArgToken tok;
  tok.text = std::string(piece);
  tok.offset = offset;
  if (piece.empty() || !is_ident_start(piece[0])) return tok;
  std::size_t q = 1;
  while (q < piece.size() && is_ident_char(piece[q])) ++q;
  const ClauseAlias* alias = reg.resolve_clause(piece.substr(0, q));
  if (!alias) return tok;
  auto rest = trim(piece.substr(q));
  if (alias->arity == ClauseArity::NoArgs) {
    if (!rest.empty()) return tok;
  } else {
    if (rest.empty() || rest[0] != '(' || match_paren(rest, 0) != rest.size() - 1) return tok;
    tok.inner = std::string(trim(rest.substr(1, rest.size() - 2)));
  }
  tok.kind = ArgToken::Kind::Known;
  tok.alias = alias;
  return tok;
}

class LineIndex {
 public:
  explicit LineIndex(std::string_view t) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] == '\n') starts_.push_back(i + 1);
  }
  SourceLocation at(std::size_t offset) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - starts_.begin());
    SourceLocation loc;
    loc.offset = offset;
    loc.line = line;
    loc.column = offset - starts_[line - 1] + 1;
    return loc;
  }

 private:
  std::vector<std::size_t> starts_;
};

}  // namespace

SourceLocation locate(std::string_view source, std::size_t offset) {
  return LineIndex(source).at(offset);
}

std::vector<ArgToken> split_args(std::string_view arg_text, const Registry& registry) {
  std::vector<ArgToken> out;
  if (trim(arg_text).empty()) return out;
  int depth = 0;
  std::size_t piece_start = 0;
  auto emit = [&](std::size_t end) {
    std::size_t b = piece_start;
    std::size_t e = end;
    while (b < e && is_space(arg_text[b])) ++b;
    while (e > b && is_space(arg_text[e - 1])) --e;
    out.push_back(classify(arg_text.substr(b, e - b), b, registry));
  };
  for (std::size_t i = 0; i < arg_text.size();) {
    char c = arg_text[i];
    if (starts_literal(arg_text, i)) {
      i = skip_literal(arg_text, i);
      continue;
    }
    if (c == '(' || c == '[' || c == '{') ++depth;
    else if ((c == ')' || c == ']' || c == '}') && depth > 0) --depth;
    else if (c == ',' && depth == 0) {
      emit(i);
      piece_start = i + 1;
    }
    ++i;
  }
  emit(arg_text.size());
  return out;
}

std::vector<SourceSegment> scan(std::string_view t, const Registry& registry) {
  std::vector<SourceSegment> segs;
  LineIndex index(t);
  LexState st;
  std::size_t b = 0;
  while (b < t.size()) {
    auto nl = t.find('\n', b);
    std::size_t e = nl == std::string_view::npos ? t.size() : nl;
    std::size_t content_end = (e > b && t[e - 1] == '\r') ? e - 1 : e;
    std::size_t next = nl == std::string_view::npos ? t.size() : nl + 1;

    std::size_t p = b;
    while (p < content_end && is_blank(t[p])) ++p;
    bool pp_line = st.pp_continues || (st.mode == LexState::Mode::Code && p < content_end && t[p] == '#');

    const DirectiveAlias* alias = nullptr;
    std::size_t q = p;
    if (st.mode == LexState::Mode::Code && !pp_line && p < content_end && is_ident_start(t[p])) {
      while (q < content_end && is_ident_char(t[q])) ++q;
      alias = registry.resolve_directive(t.substr(p, q - p));
    }
    std::size_t r = q;
    while (r < content_end && is_blank(t[r])) ++r;
    bool paren = alias && r < content_end && t[r] == '(';

    if (alias && alias->arity == DirectiveArity::NoArgs && paren)
      throw Error(ErrorCode::ArgsOnNoArgsAlias,
                  alias->name + " takes no arguments", index.at(r));

    if (!alias || (alias->arity == DirectiveArity::VarArgs && !paren)) {
      lex_line(t, b, content_end, st);
      st.pp_continues = pp_line && content_end > b && t[content_end - 1] == '\\';
      SourceSegment seg;
      seg.text = std::string(t.substr(b, next - b));
      seg.origin = index.at(b);
      segs.push_back(std::move(seg));
      b = next;
      continue;
    }

    DirectiveInvocation inv;
    inv.alias = alias;
    inv.indent = std::string(t.substr(b, p - b));
    inv.loc = index.at(p);
    std::size_t trailing_begin = q;
    if (paren) {
      std::size_t close = find_close(t, r);
      if (close == std::string_view::npos)
        throw Error(ErrorCode::UnbalancedParentheses,
                    "unbalanced parentheses in " + alias->name + " invocation", inv.loc);
      inv.has_parens = true;
      inv.args_text = std::string(t.substr(r + 1, close - r - 1));
      inv.args_loc = index.at(r + 1);
      inv.args = split_args(inv.args_text, registry);
      for (auto& a : inv.args) a.loc = index.at(r + 1 + a.offset);
      trailing_begin = close + 1;
      // The invocation ends with the line holding the closing parenthesis.
      nl = t.find('\n', close);
      e = nl == std::string_view::npos ? t.size() : nl;
      content_end = (e > close && t[e - 1] == '\r') ? e - 1 : e;
      next = nl == std::string_view::npos ? t.size() : nl + 1;
    }
    inv.trailing_text = std::string(t.substr(trailing_begin, content_end - trailing_begin));
    inv.newline = std::string(t.substr(content_end, next - content_end));
    lex_line(t, trailing_begin, content_end, st);
    st.pp_continues = false;

    SourceSegment seg;
    seg.kind = SourceSegment::Kind::Invocation;
    seg.text = std::string(t.substr(b, next - b));
    seg.origin = index.at(b);
    seg.invocation = std::move(inv);
    segs.push_back(std::move(seg));
    b = next;
  }
  return segs;
}

}  // namespace unioffload
