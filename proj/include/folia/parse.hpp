#pragma once

// Polynomial expression grammar and its printer.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' integer)?
//   atom   := integer | identifier | '(' expr ')'
//
// Identifiers are [A-Za-z][A-Za-z0-9_]*. Division is allowed by nonzero
// constants and by units of the ring (products of inverted elements), which is
// how localized elements such as y/x are written. Juxtaposition is an error.

#include <cctype>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "folia/poly.hpp"

namespace folia {

struct ParseError : std::runtime_error {
  ParseError(std::size_t column, const std::string& what)
      : std::runtime_error("column " + std::to_string(column + 1) + ": " + what), column(column) {}
  std::size_t column;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, RingPtr ring) : s_(text), ring_(std::move(ring)) {}

  Poly parse() {
    skip();
    if (i_ == s_.size()) throw ParseError(i_, "empty expression");
    Poly p = expr();
    skip();
    if (i_ != s_.size()) {
      if (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '(')
        throw ParseError(i_, "juxtaposition is not multiplication; use '*'");
      throw ParseError(i_, std::string("unexpected '") + s_[i_] + "'");
    }
    return p;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly acc = term();
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }

  Poly term() {
    Poly acc = unary();
    for (;;) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (skip(), i_ < s_.size() && s_[i_] == '/') {
        std::size_t at = i_++;
        Poly d = unary();
        if (d.is_zero()) throw ParseError(at, "division by zero");
        if (d.is_constant()) {
          acc = (1 / d.terms()[0].coeff) * acc;
        } else {
          auto inv = inverse(d);
          if (!inv) throw ParseError(at, "divisor is not invertible in this ring");
          acc = acc * *inv;
        }
      } else {
        return acc;
      }
    }
  }

  Poly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Poly power() {
    Poly base = atom();
    if (eat('^')) {
      skip();
      std::size_t at = i_;
      if (i_ < s_.size() && s_[i_] == '-') throw ParseError(at, "exponent must be a nonnegative integer literal");
      std::string digits = read_digits();
      if (digits.empty()) throw ParseError(at, "exponent must be a nonnegative integer literal");
      if (digits.size() > 4) throw ParseError(at, "exponent too large");
      base = base.pow(static_cast<unsigned>(std::stoul(digits)));
    }
    return base;
  }

  Poly atom() {
    skip();
    if (i_ == s_.size()) throw ParseError(i_, "unexpected end of expression");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Poly p = expr();
      if (!eat(')')) throw ParseError(i_, "expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Poly::constant(ring_, Rational(mpz_class(read_digits())));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t at = i_;
      std::string name;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        name += s_[i_++];
      auto idx = ring_->index_of(name);
      if (!idx) throw ParseError(at, "unknown variable '" + name + "'");
      return Poly::variable(ring_, *idx);
    }
    throw ParseError(i_, std::string("unexpected '") + c + "'");
  }

  std::string read_digits() {
    std::string d;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) d += s_[i_++];
    return d;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  RingPtr ring_;
};

inline std::string monomial_string(const std::vector<std::string>& names, const Exponents& e,
                                   std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[i];
    if (e[i] > 1) out += '^' + std::to_string(e[i]);
  }
  return out;
}

inline std::string svec_string(const std::vector<std::string>& names, const SVec& v, std::size_t count) {
  if (v.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : v) {
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    std::string mono = monomial_string(names, t.exp, count);
    std::string body;
    if (mono.empty()) body = c.get_str();
    else if (c == 1) body = mono;
    else body = c.get_str() + "*" + mono;
    if (first) out += neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

}  // namespace detail

inline Poly parse_poly(std::string_view text, const RingPtr& ring) {
  return detail::ExprParser(text, ring).parse();
}

/// Canonical text of p: terms in descending ring order; on localized rings a
/// term's Rabinowitsch part is printed as a denominator, e.g. y/x, 1/(x*y).
inline std::string to_string(const Poly& p) {
  const auto& R = p.ring();
  const auto& names = R->variables();
  const std::size_t n = R->nvars();
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    std::string num = detail::monomial_string(names, t.exp, n);
    // Denominator: product of inverted elements raised to the w exponents.
    std::vector<std::string> den_factors;
    int den_count = 0;
    for (std::size_t j = 0; j < R->ninverted(); ++j) {
      int e = t.exp[n + j];
      if (e == 0) continue;
      SVec f = R->inverted()[j];
      for (auto& u : f) u.exp.resize(n);
      std::string base;
      bool bare = f.size() == 1 && f[0].coeff == 1 && total_degree(f[0].exp) == 1;
      if (f.size() == 1 && f[0].coeff == 1) base = detail::monomial_string(names, f[0].exp, n);
      else base = "(" + detail::svec_string(names, f, n) + ")";
      if (e > 1) {
        if (!bare && base.front() != '(') base = "(" + base + ")";
        base += "^" + std::to_string(e);
      } else if (!bare && base.front() != '(') {
        base = "(" + base + ")";
      }
      den_factors.push_back(base);
      den_count += 1;
    }
    std::string body;
    if (num.empty()) body = (c == 1 && den_count > 0) ? "1" : c.get_str();
    else body = (c == 1 ? "" : c.get_str() + "*") + num;
    if (den_count == 1) {
      body += "/" + den_factors[0];
    } else if (den_count > 1) {
      std::string d;
      for (const auto& f : den_factors) d += (d.empty() ? "" : "*") + f;
      body += "/(" + d + ")";
    }
    if (first) out += neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

}  // namespace folia
