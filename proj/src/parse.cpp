#include <cctype>
#include <sstream>

#include "varfactor/errors.hpp"
#include "varfactor/rational_polynomial.hpp"

namespace varfactor {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& variables)
      : text_(text), vars_(variables) {}

  RationalPolynomial run() {
    RationalPolynomial out(vars_.size());
    skip_ws();
    if (at_end()) fail("empty input");

    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1 : 1;
      ++pos_;
      skip_ws();
    }
    parse_term(out, sign);
    skip_ws();
    while (!at_end()) {
      const char c = peek();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      ++pos_;
      skip_ws();
      parse_term(out, c == '-' ? -1 : 1);
      skip_ws();
    }
    return out;
  }

 private:
  void parse_term(RationalPolynomial& out, int sign) {
    Rational coeff(sign);
    Monomial mono(vars_.size());
    bool have_coeff = false;
    if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      coeff *= parse_rational();
      have_coeff = true;
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
        if (at_end() || !is_ident_start(peek())) fail("expected variable after '*'");
      }
    }
    if (!at_end() && is_ident_start(peek())) {
      parse_monomial(mono);
      skip_ws();
      while (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
        parse_monomial(mono);
        skip_ws();
      }
    } else if (!have_coeff) {
      fail("expected coefficient or variable");
    }
    out.add_term(mono, coeff);
  }

  Rational parse_rational() {
    Integer num = parse_integer();
    skip_ws();
    if (!at_end() && peek() == '/') {
      ++pos_;
      skip_ws();
      const auto den_pos = pos_;
      Integer den = parse_integer();
      if (den == 0) fail("zero denominator", den_pos);
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    return Rational(num);
  }

  Integer parse_integer() {
    const auto start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected integer");
    return Integer(std::string(text_.substr(start, pos_ - start)), 10);
  }

  void parse_monomial(Monomial& mono) {
    const auto start = pos_;
    if (at_end() || !is_ident_start(peek())) fail("expected variable");
    while (!at_end() && is_ident_char(peek())) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    std::size_t index = vars_.size();
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) index = i;
    }
    if (index == vars_.size()) fail("unknown variable '" + name + "'", start);

    std::uint32_t power = 1;
    skip_ws();
    if (!at_end() && peek() == '^') {
      ++pos_;
      skip_ws();
      const auto exp_pos = pos_;
      Integer e = parse_integer();
      if (e <= 0 || !e.fits_uint_p()) fail("exponent must be a positive integer", exp_pos);
      power = static_cast<std::uint32_t>(e.get_ui());
    }
    mono.exponents[index] += power;
  }

  static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail(const std::string& what, std::size_t at) const { throw ParseError(what, at); }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalPolynomial parse_poly(std::string_view text, const std::vector<std::string>& variables) {
  return Parser(text, variables).run();
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const RationalPolynomial& p, const std::vector<std::string>& variables) {
  if (variables.size() != p.nvars()) throw std::invalid_argument("variable list does not match polynomial");
  if (p.is_zero()) return "0";

  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c < 0;
    const Rational mag = abs(c);
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;

    bool need_star = false;
    if (m.is_one() || mag != 1) {
      os << mag.get_str();
      need_star = true;
    }
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      const auto e = m.exponents[i];
      if (e == 0) continue;
      if (need_star) os << '*';
      os << variables[i];
      if (e > 1) os << '^' << e;
      need_star = true;
    }
  }
  return os.str();
}

}  // namespace varfactor
