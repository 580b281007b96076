#include <cctype>

#include "atomiso/errors.hpp"
#include "atomiso/expr.hpp"

namespace atomiso {

namespace {

enum class Tok : std::uint8_t {
  LBrace, RBrace, LParen, RParen, Comma, Bar, Plus, Dot,
  Eq, Neq, Lt, Le, Gt, Ge, Arrow, Ident, Atom, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Bar: return "'|'";
    case Tok::Plus: return "'+'";
    case Tok::Dot: return "'.'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Arrow: return "'->'";
    case Tok::Ident: return "identifier";
    case Tok::Atom: return "atom literal";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool is_keyword(const std::string& s) {
  static const char* kw[] = {"in", "atoms", "empty", "and", "or", "not", "exists", "forall", "true", "false"};
  for (const char* k : kw)
    if (s == k) return true;
  return false;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto digit = [&](std::size_t j) { return j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])); };
  while (i < src.size()) {
    const char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    const std::size_t l = line, c = col;
    auto simple = [&](Tok t, std::size_t n) {
      out.push_back({t, std::string(src.substr(i, n)), l, c});
      advance(n);
    };
    if (ch == '#') {
      if (!digit(i + 1)) {
        while (i < src.size() && src[i] != '\n') advance(1);
        continue;
      }
      std::size_t j = i + 1;
      while (digit(j)) ++j;
      simple(Tok::Atom, j - i);
      continue;
    }
    if (digit(i) || (ch == '-' && digit(i + 1))) {
      std::size_t j = i + 1;
      while (digit(j)) ++j;
      if (j < src.size() && src[j] == '/' && digit(j + 1)) {
        ++j;
        while (digit(j)) ++j;
      }
      simple(Tok::Atom, j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      simple(Tok::Ident, j - i);
      continue;
    }
    auto next = i + 1 < src.size() ? src[i + 1] : '\0';
    switch (ch) {
      case '{': simple(Tok::LBrace, 1); continue;
      case '}': simple(Tok::RBrace, 1); continue;
      case '(': simple(Tok::LParen, 1); continue;
      case ')': simple(Tok::RParen, 1); continue;
      case ',': simple(Tok::Comma, 1); continue;
      case '|': simple(Tok::Bar, 1); continue;
      case '+': simple(Tok::Plus, 1); continue;
      case '.': simple(Tok::Dot, 1); continue;
      case '=': simple(Tok::Eq, 1); continue;
      case '!':
        if (next == '=') {
          simple(Tok::Neq, 2);
          continue;
        }
        break;
      case '<':
        simple(next == '=' ? Tok::Le : Tok::Lt, next == '=' ? 2 : 1);
        continue;
      case '>':
        simple(next == '=' ? Tok::Ge : Tok::Gt, next == '=' ? 2 : 1);
        continue;
      case '-':
        if (next == '>') {
          simple(Tok::Arrow, 2);
          continue;
        }
        break;
      default:
        break;
    }
    throw SyntaxError(std::string("unexpected character '") + ch + "'", l, c);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, const Backend& b) : toks_(lex(src)), backend_(b) {}

  Expr top_expr() {
    auto e = expr();
    expect(Tok::End);
    check_closed(e.free_vars());
    validate(e, backend_);
    return e;
  }

  Formula top_formula() {
    auto f = formula();
    expect(Tok::End);
    backend_.validate(f);
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok t) const { return peek().kind == t; }
  bool at_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail(const std::string& what, const Token& t) const { throw SyntaxError(what, t.line, t.col); }

  const Token& expect(Tok t) {
    if (!at(t)) fail(std::string("expected ") + describe(t) + ", found " + found(peek()), peek());
    return toks_[pos_++];
  }

  void expect_word(const char* w) {
    if (!at_word(w)) fail(std::string("expected '") + w + "', found " + found(peek()), peek());
    ++pos_;
  }

  static std::string found(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  std::string name() {
    const auto& t = expect(Tok::Ident);
    if (is_keyword(t.text)) fail("keyword '" + t.text + "' used as a variable", t);
    if (t.text.front() == '_') fail("identifiers starting with '_' are reserved", t);
    occurrences_.push_back(t);
    return t.text;
  }

  void check_closed(const std::vector<std::string>& free) const {
    if (free.empty()) return;
    for (const auto& t : occurrences_)
      if (t.text == free.front()) fail("unbound variable '" + free.front() + "'", t);
    fail("unbound variable '" + free.front() + "'", toks_.front());
  }

  Atom atom_literal() {
    const auto& t = expect(Tok::Atom);
    auto a = Atom::parse(t.text);
    if (!a) fail("bad atom literal '" + t.text + "'", t);
    if (a->kind() != backend_.atom_kind())
      fail("atom " + t.text + " is not an atom of the " + std::string(backend_.name()) + " backend", t);
    return *a;
  }

  // ---------------------------------------------------------- expressions

  Expr expr() {
    const Token start = peek();
    auto first = primary();
    if (!at(Tok::Plus)) return first;
    std::vector<Comp> comps;
    auto add = [&](const Expr& e, const Token& where) {
      if (!e.is_set()) fail("union operand is not a set", where);
      auto cs = clauses(e);
      comps.insert(comps.end(), cs.begin(), cs.end());
    };
    add(first, start);
    while (at(Tok::Plus)) {
      ++pos_;
      const Token where = peek();
      add(primary(), where);
    }
    return Expr::set(std::move(comps));
  }

  Expr primary() {
    const auto& t = peek();
    switch (t.kind) {
      case Tok::Atom:
        return Expr::atom(atom_literal());
      case Tok::LParen: {
        ++pos_;
        std::vector<Expr> items{expr()};
        while (at(Tok::Comma)) {
          ++pos_;
          items.push_back(expr());
        }
        expect(Tok::RParen);
        if (items.size() == 1) return items.front();
        return Expr::tuple(std::move(items));
      }
      case Tok::LBrace:
        return braces();
      case Tok::Ident:
        if (t.text == "atoms") {
          ++pos_;
          return Expr::atoms();
        }
        if (t.text == "empty") {
          ++pos_;
          return Expr::empty();
        }
        return Expr::var(name());
      default:
        fail("expected an expression, found " + found(t), t);
    }
  }

  Expr braces() {
    expect(Tok::LBrace);
    auto element = expr();
    if (at(Tok::Bar)) {
      ++pos_;
      return comprehension(std::move(element));
    }
    std::vector<Expr> elements{element};
    while (at(Tok::Comma)) {
      ++pos_;
      elements.push_back(expr());
    }
    expect(Tok::RBrace);
    return Expr::enumerate(std::move(elements));
  }

  Expr comprehension(Expr element) {
    std::vector<std::string> binders;
    Formula guard = truth();
    const bool binder_list = peek().kind == Tok::Ident && !is_keyword(peek().text) &&
                             (peek(1).kind == Tok::Comma || (peek(1).kind == Tok::Ident && peek(1).text == "in"));
    if (binder_list) {
      while (true) {
        const Token where = peek();
        auto b = name();
        if (std::find(binders.begin(), binders.end(), b) != binders.end()) fail("duplicate binder '" + b + "'", where);
        binders.push_back(b);
        if (!at(Tok::Comma)) break;
        ++pos_;
      }
      expect_word("in");
      expect_word("atoms");
      if (at(Tok::Comma)) {
        ++pos_;
        guard = formula();
      }
    } else {
      // {e | guard}: the element's variables are the binders
      binders = element.free_vars();
      guard = formula();
    }
    expect(Tok::RBrace);
    return Expr::comp(std::move(element), std::move(binders), std::move(guard));
  }

  // ---------------------------------------------------------- formulas

  Formula formula() {
    auto lhs = disjunction();
    if (at(Tok::Arrow)) {
      ++pos_;
      return implies(lhs, formula());
    }
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (at_word("or")) {
      ++pos_;
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts.front() : disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (at_word("and")) {
      ++pos_;
      parts.push_back(unary());
    }
    return parts.size() == 1 ? parts.front() : conj(std::move(parts));
  }

  Formula unary() {
    if (at_word("not")) {
      ++pos_;
      return neg(unary());
    }
    if (at_word("exists") || at_word("forall")) {
      const bool ex = peek().text == "exists";
      ++pos_;
      std::vector<std::string> vars{name()};
      while (at(Tok::Comma)) {
        ++pos_;
        vars.push_back(name());
      }
      expect(Tok::Dot);
      auto body = formula();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = ex ? exists(*it, body) : forall(*it, body);
      return body;
    }
    return atomic();
  }

  Formula atomic() {
    if (at_word("true")) {
      ++pos_;
      return truth();
    }
    if (at_word("false")) {
      ++pos_;
      return falsity();
    }
    if (at(Tok::LParen)) {
      ++pos_;
      auto f = formula();
      expect(Tok::RParen);
      return f;
    }
    if (at_word("R") && peek(1).kind == Tok::LParen) {
      ++pos_;
      ++pos_;
      auto a = term();
      expect(Tok::Comma);
      auto b = term();
      expect(Tok::Comma);
      auto c = term();
      expect(Tok::RParen);
      return cyc(a, b, c);
    }
    auto lhs = term();
    const Token op = peek();
    switch (op.kind) {
      case Tok::Eq:
        ++pos_;
        return eq(lhs, term());
      case Tok::Neq:
        ++pos_;
        return neq(lhs, term());
      case Tok::Lt:
        ++pos_;
        return lt(lhs, term());
      case Tok::Le:
        ++pos_;
        return le(lhs, term());
      case Tok::Gt:
        ++pos_;
        return lt(term(), lhs);
      case Tok::Ge:
        ++pos_;
        return le(term(), lhs);
      default:
        fail("expected a relation, found " + found(op), op);
    }
  }

  Term term() {
    if (at(Tok::Atom)) return Term::constant(atom_literal());
    return Term::var(name());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Backend& backend_;
  std::vector<Token> occurrences_;
};

}  // namespace

Expr parse_expr(std::string_view text, const Backend& b) { return Parser(text, b).top_expr(); }

Formula parse_formula(std::string_view text, const Backend& b) { return Parser(text, b).top_formula(); }

}  // namespace atomiso
