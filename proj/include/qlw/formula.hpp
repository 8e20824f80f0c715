#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "qlw/common.hpp"

namespace qlw {

// Propositional language: elementary identifiers, constants 1 (always true)
// and 0 (always false), connectives ~ & | -> and the sequential
// conjunction &> (left operand tested first).
enum class Connective { Elementary, Top, Bottom, Not, And, Or, Implies, Seq };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("syntax error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s.substr(1)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

// Immutable formula tree; share freely across threads.
class Formula {
 public:
  static FormulaPtr elementary(std::string name) {
    if (!is_identifier(name))
      throw Error("invalid elementary name: \"" + name + "\"");
    return FormulaPtr(new Formula(Connective::Elementary, std::move(name), nullptr, nullptr));
  }
  static FormulaPtr top() { return FormulaPtr(new Formula(Connective::Top, "", nullptr, nullptr)); }
  static FormulaPtr bottom() { return FormulaPtr(new Formula(Connective::Bottom, "", nullptr, nullptr)); }
  static FormulaPtr negation(FormulaPtr child) {
    return make_unary(Connective::Not, std::move(child));
  }
  static FormulaPtr conjunction(FormulaPtr l, FormulaPtr r) {
    return make_binary(Connective::And, std::move(l), std::move(r));
  }
  static FormulaPtr disjunction(FormulaPtr l, FormulaPtr r) {
    return make_binary(Connective::Or, std::move(l), std::move(r));
  }
  static FormulaPtr implication(FormulaPtr l, FormulaPtr r) {
    return make_binary(Connective::Implies, std::move(l), std::move(r));
  }
  static FormulaPtr sequential(FormulaPtr l, FormulaPtr r) {
    return make_binary(Connective::Seq, std::move(l), std::move(r));
  }

  Connective kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const FormulaPtr& left() const { return left_; }
  const FormulaPtr& right() const { return right_; }

  bool is_binary() const {
    return kind_ == Connective::And || kind_ == Connective::Or ||
           kind_ == Connective::Implies || kind_ == Connective::Seq;
  }

  bool contains_seq() const {
    if (kind_ == Connective::Seq) return true;
    if (left_ && left_->contains_seq()) return true;
    if (right_ && right_->contains_seq()) return true;
    return false;
  }

 private:
  Formula(Connective kind, std::string name, FormulaPtr l, FormulaPtr r)
      : kind_(kind), name_(std::move(name)), left_(std::move(l)), right_(std::move(r)) {}

  static FormulaPtr make_unary(Connective kind, FormulaPtr child) {
    if (!child) throw Error("null formula operand");
    return FormulaPtr(new Formula(kind, "", std::move(child), nullptr));
  }
  static FormulaPtr make_binary(Connective kind, FormulaPtr l, FormulaPtr r) {
    if (!l || !r) throw Error("null formula operand");
    return FormulaPtr(new Formula(kind, "", std::move(l), std::move(r)));
  }

  Connective kind_;
  std::string name_;
  FormulaPtr left_, right_;
};

inline bool equal(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Connective::Elementary:
      return a.name() == b.name();
    case Connective::Top:
    case Connective::Bottom:
      return true;
    case Connective::Not:
      return equal(*a.left(), *b.left());
    default:
      return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
  }
}

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

inline void collect_elementaries(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Connective::Elementary) {
    out.insert(f.name());
    return;
  }
  if (f.left()) collect_elementaries(*f.left(), out);
  if (f.right()) collect_elementaries(*f.right(), out);
}

inline std::set<std::string> elementaries(const Formula& f) {
  std::set<std::string> out;
  collect_elementaries(f, out);
  return out;
}

namespace detail {

enum class TokenKind { Ident, Top, Bottom, Not, And, Seq, Or, Implies, LParen, RParen, End };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t position;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) return {TokenKind::End, "", start};
    char c = text_[pos_];
    switch (c) {
      case '~': ++pos_; return {TokenKind::Not, "~", start};
      case '|': ++pos_; return {TokenKind::Or, "|", start};
      case '(': ++pos_; return {TokenKind::LParen, "(", start};
      case ')': ++pos_; return {TokenKind::RParen, ")", start};
      case '1': ++pos_; return {TokenKind::Top, "1", start};
      case '0': ++pos_; return {TokenKind::Bottom, "0", start};
      case '&':
        ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '>') {
          ++pos_;
          return {TokenKind::Seq, "&>", start};
        }
        return {TokenKind::And, "&", start};
      case '-':
        ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '>') {
          ++pos_;
          return {TokenKind::Implies, "->", start};
        }
        throw ParseError(start, "expected '->' after '-'");
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      return {TokenKind::Ident, std::string(text_.substr(start, pos_ - start)), start};
    }
    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline constexpr int kMaxNesting = 1000;

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  FormulaPtr parse_all() {
    FormulaPtr f = parse_implication(0);
    if (cur_.kind != TokenKind::End)
      throw ParseError(cur_.position, "unexpected '" + cur_.text + "'");
    return f;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  void check_depth(int depth) const {
    if (depth > kMaxNesting)
      throw ParseError(cur_.position, "formula nesting too deep");
  }

  // impl := or ("->" impl)?   right-associative
  FormulaPtr parse_implication(int depth) {
    check_depth(depth);
    FormulaPtr left = parse_disjunction(depth);
    if (cur_.kind == TokenKind::Implies) {
      advance();
      return Formula::implication(std::move(left), parse_implication(depth + 1));
    }
    return left;
  }

  // or := conj ("|" conj)*
  FormulaPtr parse_disjunction(int depth) {
    FormulaPtr left = parse_conjunction(depth);
    while (cur_.kind == TokenKind::Or) {
      advance();
      left = Formula::disjunction(std::move(left), parse_conjunction(depth));
    }
    return left;
  }

  // conj := unary (("&"|"&>") unary)*  left-associative; a chain must not
  // mix '&' and '&>' without parentheses
  FormulaPtr parse_conjunction(int depth) {
    FormulaPtr left = parse_unary(depth);
    bool have_op = false;
    TokenKind chain_op = TokenKind::And;
    while (cur_.kind == TokenKind::And || cur_.kind == TokenKind::Seq) {
      if (have_op && cur_.kind != chain_op)
        throw ParseError(cur_.position,
                         "mixing '&' and '&>' requires parentheses");
      chain_op = cur_.kind;
      have_op = true;
      bool seq = cur_.kind == TokenKind::Seq;
      advance();
      FormulaPtr right = parse_unary(depth);
      left = seq ? Formula::sequential(std::move(left), std::move(right))
                 : Formula::conjunction(std::move(left), std::move(right));
    }
    return left;
  }

  // unary := "~" unary | atom
  FormulaPtr parse_unary(int depth) {
    check_depth(depth);
    if (cur_.kind == TokenKind::Not) {
      advance();
      return Formula::negation(parse_unary(depth + 1));
    }
    return parse_atom(depth);
  }

  // atom := "1" | "0" | ident | "(" formula ")"
  FormulaPtr parse_atom(int depth) {
    switch (cur_.kind) {
      case TokenKind::Top:
        advance();
        return Formula::top();
      case TokenKind::Bottom:
        advance();
        return Formula::bottom();
      case TokenKind::Ident: {
        FormulaPtr f = Formula::elementary(cur_.text);
        advance();
        return f;
      }
      case TokenKind::LParen: {
        advance();
        FormulaPtr f = parse_implication(depth + 1);
        if (cur_.kind != TokenKind::RParen)
          throw ParseError(cur_.position, "expected ')'");
        advance();
        return f;
      }
      case TokenKind::End:
        throw ParseError(cur_.position, "unexpected end of input");
      default:
        throw ParseError(cur_.position, "unexpected '" + cur_.text + "'");
    }
  }

  Lexer lexer_;
  Token cur_;
};

// Rendering precedence; parentheses are emitted when a child binds looser
// than its context requires.
inline int level(Connective k) {
  switch (k) {
    case Connective::Implies: return 1;
    case Connective::Or: return 2;
    case Connective::And:
    case Connective::Seq: return 3;
    case Connective::Not: return 4;
    default: return 5;
  }
}

inline void render_to(const Formula& f, int ctx, std::string& out) {
  bool parens = level(f.kind()) < ctx;
  if (parens) out += '(';
  switch (f.kind()) {
    case Connective::Elementary: out += f.name(); break;
    case Connective::Top: out += '1'; break;
    case Connective::Bottom: out += '0'; break;
    case Connective::Not:
      out += '~';
      render_to(*f.left(), 4, out);
      break;
    case Connective::Implies:
      render_to(*f.left(), 2, out);
      out += " -> ";
      render_to(*f.right(), 1, out);
      break;
    case Connective::Or:
      render_to(*f.left(), 2, out);
      out += " | ";
      render_to(*f.right(), 3, out);
      break;
    case Connective::And:
    case Connective::Seq: {
      // A chain continues only through the same conjunction token; the other
      // one must be parenthesized even though it sits on the same level.
      int left_ctx = f.left()->kind() == f.kind() ? 3 : 4;
      render_to(*f.left(), left_ctx, out);
      out += f.kind() == Connective::And ? " & " : " &> ";
      render_to(*f.right(), 4, out);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace detail

inline FormulaPtr parse(std::string_view text) {
  return detail::Parser(text).parse_all();
}

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_to(f, 0, out);
  return out;
}

inline std::string render(const FormulaPtr& f) {
  if (!f) throw Error("null formula");
  return render(*f);
}

}  // namespace qlw
