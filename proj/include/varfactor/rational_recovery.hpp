#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "varfactor/approx_polynomial.hpp"
#include "varfactor/errors.hpp"
#include "varfactor/rational_polynomial.hpp"
#include "varfactor/scalar.hpp"

namespace varfactor {

/// Finite continued fraction [a0; a1, a2, ...].
struct CFExpansion {
  std::vector<Integer> terms;
};

/// Coupled tolerances for exact recovery at denominator bound L:
/// K = L + 1, eps1 = 1/K, beta = 1/((2K+2) L (L-1)). `eps` is the sampling
/// tolerance, filled in once the interpolation sensitivity is known.
struct ErrorBudget {
  Integer L;
  Integer K;
  Rational beta;
  Rational eps1;
  std::optional<long double> eps;
};

ErrorBudget compute_budget(const Integer& L);

/// Exact value of a decimal literal such as "-0.6667" or "1.5e-3".
Rational parse_decimal(std::string_view text);

/// Exact value of a finite continued fraction, in lowest terms.
Rational cf_evaluate(const CFExpansion& cf);

/// Term cap for cf_expand: 4 log2(1/eps1) + 64.
std::size_t cf_term_cap(const Rational& eps1);

/// Splits off integer parts a_i with remainders b_i and stops at the first
/// b_i < eps1. Remainders are carried at the precision of `Real`.
template <class Real>
CFExpansion cf_expand(const Real& a, const Rational& eps1) {
  if (a < 0) throw std::domain_error("cf_expand needs a non-negative input");
  if (eps1 <= 0) throw std::domain_error("cf_expand needs eps1 > 0");
  const Real threshold = to_real<Real>(eps1);
  const std::size_t cap = cf_term_cap(eps1);

  CFExpansion cf;
  Real x = a;
  while (true) {
    const Integer whole = floor_to_integer(x);
    cf.terms.push_back(whole);
    const Real frac = x - to_real<Real>(whole);
    if (frac < threshold) break;
    if (cf.terms.size() >= cap) throw Divergence("continued fraction did not terminate");
    x = Real(1) / frac;
  }
  return cf;
}

/// Recovers p/q (q <= L) from an approximation within beta(L). The sign is
/// split off first; magnitudes below beta snap to zero. L = 1 is accepted
/// and uses the L = 2 tolerances with an integer-only denominator cap.
/// Throws BoundViolated when the recovered denominator exceeds L.
template <class Real>
Rational recover_rational(const Real& r, const Integer& L) {
  if (L < 1) throw std::domain_error("denominator bound must be positive");
  const ErrorBudget budget = compute_budget(L < 2 ? Integer(2) : L);
  const Real magnitude = abs(r);
  if (magnitude < to_real<Real>(budget.beta)) return Rational(0);

  CFExpansion cf;
  try {
    cf = cf_expand(magnitude, budget.eps1);
  } catch (const Divergence&) {
    throw BoundViolated("expansion did not terminate");
  }
  Rational q = cf_evaluate(cf);
  if (q.get_den() > L) throw BoundViolated("denominator " + q.get_den().get_str() + " > " + L.get_str());
  return r < 0 ? Rational(-q) : q;
}

/// Term-by-term recovery of the real parts. Coefficients that snap to zero
/// are dropped.
template <class Real>
RationalPolynomial recover_coefficients(const ApproxPolynomial<Real>& g, const Integer& L) {
  const ErrorBudget budget = compute_budget(L < 2 ? Integer(2) : L);
  const Real beta = to_real<Real>(budget.beta);
  RationalPolynomial out(g.nvars());
  for (const auto& [m, c] : g.terms()) {
    if (abs(c.imag()) >= beta) throw NotRealPolynomial();
    try {
      out.add_term(m, recover_rational(c.real(), L));
    } catch (const BoundViolated&) {
      throw NotRationalAtBound();
    }
  }
  return out;
}

}  // namespace varfactor
