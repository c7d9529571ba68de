#include "varfactor/rational_recovery.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace varfactor {

ErrorBudget compute_budget(const Integer& L) {
  if (L < 2) throw std::domain_error("error budget needs L >= 2");
  ErrorBudget b;
  b.L = L;
  b.K = L + 1;
  b.eps1 = Rational(Integer(1), b.K);
  const Integer denom = (2 * b.K + 2) * L * (L - 1);
  b.beta = Rational(Integer(1), denom);
  b.beta.canonicalize();
  b.eps1.canonicalize();
  return b;
}

Rational cf_evaluate(const CFExpansion& cf) {
  if (cf.terms.empty()) throw std::domain_error("empty continued fraction");
  for (std::size_t i = 1; i < cf.terms.size(); ++i) {
    if (cf.terms[i] < 1) throw std::domain_error("continued fraction terms after a0 must be >= 1");
  }
  // Fold from the right: value = a_k, then a_{k-1} + 1/value, ...
  Rational value(cf.terms.back());
  for (auto it = cf.terms.rbegin() + 1; it != cf.terms.rend(); ++it) {
    value = Rational(*it) + 1 / value;
  }
  value.canonicalize();
  return value;
}

Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  auto fail = [&](const char* what) -> Rational { throw ParseError(what, i); };
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    digits += text[i];
    seen_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      digits += text[i];
      ++scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) return fail("expected digits");
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
    std::string e;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) e += text[i];
    if (e.empty() || e.size() > 6) return fail("bad exponent");
    exponent = std::stol(e) * (eneg ? -1 : 1);
  }
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) return fail("unexpected character");

  Integer num(digits, 10);
  Integer ten_pow;
  const long shift = exponent - scale;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift < 0 ? Rational(num, ten_pow) : Rational(num * ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::size_t cf_term_cap(const Rational& eps1) {
  // log2(1/eps1) rounded up, from the bit lengths of numerator and denominator.
  const auto den_bits = mpz_sizeinbase(eps1.get_den_mpz_t(), 2);
  const auto num_bits = mpz_sizeinbase(eps1.get_num_mpz_t(), 2);
  const std::size_t log2_inv = den_bits > num_bits ? den_bits - num_bits + 1 : 1;
  return 4 * log2_inv + 64;
}

}  // namespace varfactor
