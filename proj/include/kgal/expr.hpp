#pragma once

// Plain-text expressions over the group coordinate algebra.
//
//   sum     := ['-'] term (('+' | '-') term)*
//   term    := product ('(x)' product)*          tensor slots, at most 3
//   product := factor (['*'] factor)*            juxtaposition multiplies
//   factor  := atom ['^' int]
//   atom    := int ['/' int] | I | L | M | a[i] | v[i] | R[i,j] | tau | '(' sum ')'
//
// L is lambda = 1/k. Element::str() output parses back to the same element.

#include "kgal/ncpoly.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgal {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Token {
  enum Kind { Num, Ident, Sym, Tensor, End } kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Num, s.substr(i, j - i), i});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), i});
      i = j;
    } else if (s.compare(i, 3, "(x)") == 0) {
      out.push_back({Token::Tensor, "(x)", i});
      i += 3;
    } else if (std::string("+-*/^()[],").find(ch) != std::string::npos) {
      out.push_back({Token::Sym, std::string(1, ch), i});
      ++i;
    } else {
      throw ParseError("unexpected character '" + std::string(1, ch) + "' at " + std::to_string(i));
    }
  }
  out.push_back({Token::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(const std::string& src, Policy p) : toks_(tokenize(src)), policy_(p) {}

  NCElement parse() {
    // Slot count: the widest top-level term.
    int depth = 0, width = 1, cur = 1;
    for (const auto& t : toks_) {
      if (t.kind == Token::Sym && t.text == "(") ++depth;
      if (t.kind == Token::Sym && t.text == ")") --depth;
      if (depth == 0 && t.kind == Token::Sym && (t.text == "+" || t.text == "-")) cur = 1;
      if (t.kind == Token::Tensor) {
        if (depth != 0) throw ParseError("'(x)' inside parentheses at " + std::to_string(t.pos));
        width = std::max(width, ++cur);
      }
    }
    if (width > NCElement::kMaxSlots) throw ParseError("at most 3 tensor slots");
    slots_ = width;
    NCElement e = sum(true);
    if (peek().kind != Token::End) fail("trailing input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool is_sym(const char* s) const { return peek().kind == Token::Sym && peek().text == s; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at " + std::to_string(peek().pos));
  }
  void expect(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    ++i_;
  }
  int integer() {
    if (peek().kind != Token::Num) fail("expected integer");
    return std::stoi(toks_[i_++].text);
  }

  NCElement sum(bool top) {
    const int slots = top ? slots_ : 1;
    NCElement acc(slots, policy_);
    bool neg = false;
    if (is_sym("-")) {
      neg = true;
      ++i_;
    }
    for (;;) {
      NCElement t = term(top);
      acc += neg ? -t : t;
      if (is_sym("+")) neg = false;
      else if (is_sym("-")) neg = true;
      else break;
      ++i_;
    }
    return acc;
  }

  NCElement term(bool top) {
    std::vector<NCElement> parts{product()};
    while (top && peek().kind == Token::Tensor) {
      ++i_;
      parts.push_back(product());
    }
    const int slots = top ? slots_ : 1;
    if (static_cast<int>(parts.size()) != slots) fail("term has " + std::to_string(parts.size()) + " slots, expected " + std::to_string(slots));
    if (slots == 1) return parts[0];
    NCElement out = NCElement::one(slots, policy_);
    for (int s = 0; s < slots; ++s) out = out * parts[s].embedded(slots, s);
    return out;
  }

  bool starts_atom() const {
    const auto& t = peek();
    return t.kind == Token::Num || t.kind == Token::Ident || (t.kind == Token::Sym && t.text == "(");
  }

  NCElement product() {
    NCElement acc = factor();
    for (;;) {
      if (is_sym("*")) {
        ++i_;
        acc = acc * factor();
      } else if (starts_atom()) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  NCElement factor() {
    NCElement base = atom();
    if (!is_sym("^")) return base;
    ++i_;
    int n = integer();
    NCElement out = NCElement::one(1, policy_);
    for (int k = 0; k < n; ++k) out = out * base;
    return out;
  }

  NCElement scalar(const GradedScalar& s) { return NCElement::scalar(s, 1, policy_); }

  int index_in_brackets() {
    expect("[");
    int i = integer();
    if (i < 1 || i > 3) fail("index out of range 1..3");
    return i;
  }

  NCElement atom() {
    const Token t = peek();
    if (t.kind == Token::Num) {
      ++i_;
      Rational q(t.text);
      if (is_sym("/")) {
        ++i_;
        int d = integer();
        if (d == 0) fail("zero denominator");
        q /= d;
      }
      return scalar(GradedScalar(ExactComplex(q)));
    }
    if (t.kind == Token::Sym && t.text == "(") {
      ++i_;
      NCElement e = sum(false);
      expect(")");
      return e;
    }
    if (t.kind != Token::Ident) fail("unexpected token '" + t.text + "'");
    ++i_;
    if (t.text == "I") return scalar(GradedScalar(ExactComplex::i()));
    if (t.text == "L") return scalar(GradedScalar::lambda());
    if (t.text == "M") return scalar(GradedScalar::mass());
    if (t.text == "tau") return NCElement::letter(GroupAlgebra::tau(), policy_);
    if (t.text == "a" || t.text == "v") {
      int i = index_in_brackets();
      expect("]");
      return NCElement::letter(t.text == "a" ? GroupAlgebra::a(i) : GroupAlgebra::v(i), policy_);
    }
    if (t.text == "R") {
      int i = index_in_brackets();
      expect(",");
      int j = integer();
      if (j < 1 || j > 3) fail("index out of range 1..3");
      expect("]");
      return NCElement::letter(GroupAlgebra::R(i, j), policy_);
    }
    --i_;
    fail("unknown identifier '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  Policy policy_;
  int slots_ = 1;
};

}  // namespace detail

/// Parses and normal-orders an expression; throws ParseError on bad input.
inline NCElement parse_group_expression(const std::string& src, Policy p = {4, 12}) {
  return detail::Parser(src, p).parse();
}

}  // namespace kgal
