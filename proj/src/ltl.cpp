#include "ltlcc/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ltlcc {

FormulaPtr make_true() {
  return std::make_shared<Formula>(Formula{FormulaKind::True, "", nullptr, nullptr});
}

FormulaPtr make_atom(const std::string& name) {
  return std::make_shared<Formula>(Formula{FormulaKind::Atom, name, nullptr, nullptr});
}

FormulaPtr make_unary(FormulaKind kind, FormulaPtr operand) {
  return std::make_shared<Formula>(Formula{kind, "", std::move(operand), nullptr});
}

FormulaPtr make_binary(FormulaKind kind, FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Formula{kind, "", std::move(lhs), std::move(rhs)});
}

namespace {

enum class Tok { True, False, Ident, Not, And, Or, Implies, Next, Until, Eventually, Always, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

private:
  void advance() {
    skip_ws_and_comments();
    std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      cur_ = {Tok::End, "", start};
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '(': ++pos_; cur_ = {Tok::LParen, "(", start}; return;
      case ')': ++pos_; cur_ = {Tok::RParen, ")", start}; return;
      case '!': ++pos_; cur_ = {Tok::Not, "!", start}; return;
      case '&': ++pos_; cur_ = {Tok::And, "&", start}; return;
      case '|': ++pos_; cur_ = {Tok::Or, "|", start}; return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          pos_ += 2;
          cur_ = {Tok::Implies, "->", start};
          return;
        }
        throw ltl_parse_error("unknown token '-'", start);
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      std::string word = text_.substr(pos_, end - pos_);
      pos_ = end;
      if (word == "true") { cur_ = {Tok::True, word, start}; return; }
      if (word == "false") { cur_ = {Tok::False, word, start}; return; }
      if (word == "X") { cur_ = {Tok::Next, word, start}; return; }
      if (word == "F") { cur_ = {Tok::Eventually, word, start}; return; }
      if (word == "G") { cur_ = {Tok::Always, word, start}; return; }
      if (word == "U") { cur_ = {Tok::Until, word, start}; return; }
      // Atom names are lowercase identifiers.
      if (!std::islower(static_cast<unsigned char>(word[0]))) {
        throw ltl_parse_error("unknown token '" + word + "'", start);
      }
      for (char wc : word) {
        if (!(std::islower(static_cast<unsigned char>(wc)) ||
              std::isdigit(static_cast<unsigned char>(wc)) || wc == '_')) {
          throw ltl_parse_error("invalid atom name '" + word + "'", start);
        }
      }
      cur_ = {Tok::Ident, word, start};
      return;
    }
    throw ltl_parse_error(std::string("unknown token '") + c + "'", start);
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token cur_;
};

// Precedence, loosest first: -> | & U unary.
class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_implies();
    if (lex_.peek().kind != Tok::End) {
      throw ltl_parse_error("unexpected trailing input", lex_.peek().offset);
    }
    return f;
  }

private:
  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.take();
      return make_binary(FormulaKind::Implies, lhs, parse_implies());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      lhs = make_binary(FormulaKind::Or, lhs, parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_until();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      lhs = make_binary(FormulaKind::And, lhs, parse_until());
    }
    return lhs;
  }

  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_unary();
    if (lex_.peek().kind == Tok::Until) {
      lex_.take();
      return make_binary(FormulaKind::Until, lhs, parse_until());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Not: lex_.take(); return make_unary(FormulaKind::Not, parse_unary());
      case Tok::Next: lex_.take(); return make_unary(FormulaKind::Next, parse_unary());
      case Tok::Eventually: lex_.take(); return make_unary(FormulaKind::Eventually, parse_unary());
      case Tok::Always: lex_.take(); return make_unary(FormulaKind::Always, parse_unary());
      default: return parse_primary();
    }
  }

  FormulaPtr parse_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::True: return make_true();
      case Tok::False: return make_unary(FormulaKind::Not, make_true());
      case Tok::Ident: return make_atom(t.text);
      case Tok::LParen: {
        FormulaPtr f = parse_implies();
        Token close = lex_.take();
        if (close.kind != Tok::RParen) {
          throw ltl_parse_error("expected ')'", close.offset);
        }
        return f;
      }
      case Tok::End: throw ltl_parse_error("unexpected end of input", t.offset);
      default: throw ltl_parse_error("dangling operator '" + t.text + "'", t.offset);
    }
  }

  Lexer lex_;
};

int precedence_level(FormulaKind k) {
  switch (k) {
    case FormulaKind::Implies: return 0;
    case FormulaKind::Or: return 1;
    case FormulaKind::And: return 2;
    case FormulaKind::Until: return 3;
    default: return 4;  // unary and terminals
  }
}

void print_rec(const FormulaPtr& f, int parent_level, bool is_right_of_rassoc, std::string& out) {
  int level = precedence_level(f->kind);
  // Parenthesize when we bind looser than the context, or equally loose on the
  // wrong side of an associative chain.
  bool need_parens = level < parent_level;
  switch (f->kind) {
    case FormulaKind::True: out += "true"; return;
    case FormulaKind::Atom: out += f->atom; return;
    case FormulaKind::Not:
    case FormulaKind::Next:
    case FormulaKind::Eventually:
    case FormulaKind::Always: {
      const char* op = f->kind == FormulaKind::Not ? "!"
                       : f->kind == FormulaKind::Next ? "X "
                       : f->kind == FormulaKind::Eventually ? "F " : "G ";
      out += op;
      print_rec(f->lhs, 4, false, out);
      return;
    }
    default: break;
  }
  if (need_parens) out += "(";
  const char* op = f->kind == FormulaKind::And ? " & "
                   : f->kind == FormulaKind::Or ? " | "
                   : f->kind == FormulaKind::Until ? " U " : " -> ";
  bool rassoc = f->kind == FormulaKind::Until || f->kind == FormulaKind::Implies;
  // Left child of a right-associative operator at the same level needs parens;
  // likewise the right child of a left-associative one.
  print_rec(f->lhs, rassoc ? level + 1 : level, false, out);
  out += op;
  print_rec(f->rhs, rassoc ? level : level + 1, true, out);
  if (need_parens) out += ")";
}

}  // namespace

FormulaPtr parse_ltl(const std::string& text) {
  if (text.empty()) throw ltl_parse_error("empty input", 0);
  Parser p(text);
  return p.parse();
}

std::string print_ltl(const FormulaPtr& f) {
  std::string out;
  print_rec(f, 0, false, out);
  return out;
}

FormulaPtr expand_derived(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::Atom:
      return f;
    case FormulaKind::Not:
      return make_unary(FormulaKind::Not, expand_derived(f->lhs));
    case FormulaKind::Next:
      return make_unary(FormulaKind::Next, expand_derived(f->lhs));
    case FormulaKind::And:
      return make_binary(FormulaKind::And, expand_derived(f->lhs), expand_derived(f->rhs));
    case FormulaKind::Until:
      return make_binary(FormulaKind::Until, expand_derived(f->lhs), expand_derived(f->rhs));
    case FormulaKind::Eventually:
      return make_binary(FormulaKind::Until, make_true(), expand_derived(f->lhs));
    case FormulaKind::Always:
      // G p == !(true U !p)
      return make_unary(
          FormulaKind::Not,
          make_binary(FormulaKind::Until, make_true(),
                      make_unary(FormulaKind::Not, expand_derived(f->lhs))));
    case FormulaKind::Or:
      // p | q == !(!p & !q)
      return make_unary(
          FormulaKind::Not,
          make_binary(FormulaKind::And, make_unary(FormulaKind::Not, expand_derived(f->lhs)),
                      make_unary(FormulaKind::Not, expand_derived(f->rhs))));
    case FormulaKind::Implies:
      // p -> q == !p | q
      return expand_derived(make_binary(FormulaKind::Or, make_unary(FormulaKind::Not, f->lhs), f->rhs));
  }
  throw std::logic_error("unreachable formula kind");
}

namespace {
void collect_atoms(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == FormulaKind::Atom) out.insert(f->atom);
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}
}  // namespace

std::vector<std::string> atomic_props(const FormulaPtr& f) {
  std::set<std::string> atoms;
  collect_atoms(f, atoms);
  return {atoms.begin(), atoms.end()};
}

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->atom != b->atom) return false;
  return formulas_equal(a->lhs, b->lhs) && formulas_equal(a->rhs, b->rhs);
}

}  // namespace ltlcc
