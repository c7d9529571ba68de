#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varfactor/monomial.hpp"

namespace varfactor {

using Integer = mpz_class;
using Rational = mpq_class;

/// Exact sparse multivariate polynomial over Q. Terms are kept in graded-lex
/// order, leading term first; no stored coefficient is zero.
class RationalPolynomial {
 public:
  using Terms = std::map<Monomial, Rational, GrlexGreater>;

  explicit RationalPolynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static RationalPolynomial constant(std::size_t nvars, const Rational& c);
  static RationalPolynomial variable(std::size_t nvars, std::size_t var);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;

  /// Adds `c` to the coefficient of `m`, dropping the term if it cancels.
  void add_term(const Monomial& m, const Rational& c);
  Rational coefficient(const Monomial& m) const;

  const Monomial& leading_monomial() const;
  const Rational& leading_coefficient() const;

  std::uint32_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  DegreeProfile degree_profile() const;
  bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

  /// Coefficients of `var`^k for k = 0..deg, each a polynomial free of `var`.
  std::vector<RationalPolynomial> coefficients_in(std::size_t var) const;

  RationalPolynomial& operator+=(const RationalPolynomial& o);
  RationalPolynomial& operator-=(const RationalPolynomial& o);
  RationalPolynomial& operator*=(const Rational& c);

  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& c) { return a *= c; }
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b);

 private:
  void check_dims(const RationalPolynomial& o) const;

  std::size_t nvars_;
  Terms terms_;
};

/// Total order used to list factors deterministically: by total degree, then
/// term by term from the leading monomial.
bool canonical_less(const RationalPolynomial& a, const RationalPolynomial& b);

RationalPolynomial partial_derivative(const RationalPolynomial& p, std::size_t var);
RationalPolynomial exact_product(std::span<const RationalPolynomial> ps);
RationalPolynomial make_monic(const RationalPolynomial& p);

/// Least common multiple of the coefficient denominators (the bound L fed to
/// rational recovery).
Integer lcm_denominators(const RationalPolynomial& p);

/// Randomized square-freeness test. For every variable the polynomial depends
/// on, the other variables are specialized to random rationals and the
/// resulting univariate polynomial is tested for coprimality with its
/// derivative. Never reports true for a polynomial with a repeated factor
/// involving a tested variable, up to the specializations drawn.
bool squarefree_probe(const RationalPolynomial& p, std::mt19937_64& rng);

/// Parses the polynomial grammar: terms joined by + and -, each term an
/// optional rational coefficient (integer or integer/integer) optionally
/// followed by `*` and a product of `var[^k]` factors.
RationalPolynomial parse_poly(std::string_view text, const std::vector<std::string>& variables);

/// Canonical text, leading term first; parse_poly(to_string(p)) == p.
std::string to_string(const RationalPolynomial& p, const std::vector<std::string>& variables);
std::string to_string(const Rational& q);

namespace univariate {

/// Dense univariate polynomial over Q, index = power, no trailing zeros.
using Dense = std::vector<Rational>;

void trim(Dense& p);
Dense derivative(const Dense& p);
Dense remainder(Dense a, const Dense& b);
Dense gcd(Dense a, Dense b);
std::size_t degree(const Dense& p);

/// Substitutes `values` for every variable except `var`.
Dense specialize(const RationalPolynomial& p, std::size_t var, std::span<const Rational> values);

}  // namespace univariate

}  // namespace varfactor
