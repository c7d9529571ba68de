#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "varfactor/approx_polynomial.hpp"
#include "varfactor/monomial.hpp"
#include "varfactor/rational_recovery.hpp"
#include "varfactor/sample_point.hpp"
#include "varfactor/scalar.hpp"

namespace varfactor {

template <class Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

/// Distinct monomials in ascending graded-lex order.
struct MonomialSet {
  std::vector<Monomial> monomials;

  std::size_t size() const { return monomials.size(); }
};

/// All monomials in `nvars` variables of total degree <= max_degree.
/// Cardinality C(max_degree + nvars, nvars).
MonomialSet monomial_candidates(unsigned max_degree, std::size_t nvars);

/// Same, restricted to monomials whose per-variable degrees fit `caps`.
MonomialSet monomial_candidates(unsigned max_degree, const DegreeProfile& caps);

/// Monomials of `ms` evaluated at m - 1 points: entry (i, j) = P_i^{alpha_j}.
/// M is the largest entry modulus, B the largest difference between two
/// entries of one row or of one column.
template <class Real>
struct EvaluationMatrix {
  CMatrix<Real> entries;
  std::vector<SamplePoint<Real>> points;
  MonomialSet monomials;
  Real M{0};
  Real B{0};
};

template <class Real>
struct MonomialStats {
  Real M;
  Real B;
};

template <class Real>
MonomialStats<Real> monomial_stats(const CMatrix<Real>& entries);

/// Evaluation rows without the m - 1 count requirement.
template <class Real>
CMatrix<Real> evaluation_rows(const std::vector<SamplePoint<Real>>& points, const MonomialSet& ms);

template <class Real>
EvaluationMatrix<Real> build_matrix(std::vector<SamplePoint<Real>> points, MonomialSet ms);

template <class Real>
struct UniquenessReport {
  bool unique = false;
  Real ratio{0};  ///< smallest / largest singular value
};

/// Numerical rank test: full row rank iff ratio > 2^16 u.
template <class Real>
UniquenessReport<Real> uniqueness_check(const EvaluationMatrix<Real>& em);

/// Unique null direction of the matrix as a monic polynomial over `em.monomials`.
/// Throws RankDeficient when uniqueness fails.
template <class Real>
ApproxPolynomial<Real> reconstruct(const EvaluationMatrix<Real>& em);

/// Unit null vector from the singular value decomposition (unnormalized phase).
template <class Real>
CVector<Real> null_direction(const EvaluationMatrix<Real>& em);

/// Cofactor expansion of the interpolation determinant along its symbolic
/// first row: coefficient k is (-1)^k times the minor with column k deleted
/// (0-based k). Exponential-free via LU, but intended as a cross-check for
/// small m.
template <class Real>
CVector<Real> cofactor_coefficients(const EvaluationMatrix<Real>& em);

/// Greedy volume-maximizing choice of `count` rows (pivoted Gram-Schmidt).
template <class Real>
std::vector<std::size_t> select_rows(const CMatrix<Real>& rows, std::size_t count);

/// 2^16 u sigma_max.
template <class Real>
Real rank_tolerance(const Real& sigma_max) {
  return ldexp(unit_roundoff<Real>(), 16) * sigma_max;
}

namespace detail {
template <class Real>
Real factorial(unsigned m) {
  Real f(1);
  for (unsigned k = 2; k <= m; ++k) f *= k;
  return f;
}
}  // namespace detail

/// |V_m| <= m! M^(m-1) B for a generalized Vandermonde determinant.
template <class Real>
Real vandermonde_bound(unsigned m, const Real& M, const Real& B) {
  if (m < 2) throw std::domain_error("vandermonde_bound needs m >= 2");
  return detail::factorial<Real>(m) * pow(M, static_cast<int>(m - 1)) * B;
}

/// Bound when one column is replaced by entries of modulus <= eps_col.
template <class Real>
Real perturbed_bound(unsigned m, const Real& M, const Real& B, const Real& eps_col) {
  if (m < 3) throw std::domain_error("perturbed_bound needs m >= 3");
  return pow(M, static_cast<int>(m - 2)) * detail::factorial<Real>(m) * B * eps_col;
}

/// Bound on |V^(1) - V^(2)| for entrywise perturbation <= eps.
template <class Real>
Real difference_bound(unsigned m, const Real& M, const Real& B, const Real& eps) {
  if (m < 3) throw std::domain_error("difference_bound needs m >= 3");
  return Real(m) * detail::factorial<Real>(m) * pow(M, static_cast<int>(m - 2)) * B * eps;
}

template <class Real>
struct ControlError {
  Real eps;
  int precision_bits;
};

/// Sampling tolerance that keeps determinant perturbations under beta(L):
/// eps = beta / (m m! M^(m-2) B). For m = 2 the sensitivity is 2! M B.
template <class Real>
ControlError<Real> control_error(const Integer& L, unsigned m, const Real& M, const Real& B) {
  if (m < 2) throw std::domain_error("control_error needs m >= 2");
  if (!(M > 0) || !(B > 0)) throw std::domain_error("control_error needs M > 0 and B > 0");
  const ErrorBudget budget = compute_budget(L);
  const Real sensitivity = m == 2 ? vandermonde_bound(2, M, B) : difference_bound(m, M, B, Real(1));
  ControlError<Real> out{to_real<Real>(budget.beta) / sensitivity, 64};
  const Real log2_inv = -log2(out.eps);
  const int bits = static_cast<int>(ceil(log2_inv).template convert_to<long>()) + 32;
  out.precision_bits = std::max(64, bits);
  return out;
}

}  // namespace varfactor
