#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <stdexcept>

#include "varfactor/errors.hpp"
#include "varfactor/interpolation.hpp"

namespace varfactor {

template <class Real>
MonomialStats<Real> monomial_stats(const CMatrix<Real>& entries) {
  Real max_abs2(0);
  Real max_diff2(0);
  const auto rows = entries.rows();
  const auto cols = entries.cols();
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      max_abs2 = std::max(max_abs2, abs2(entries(i, j)));
      for (Eigen::Index k = j + 1; k < cols; ++k) {
        max_diff2 = std::max(max_diff2, abs2<Real>(entries(i, j) - entries(i, k)));
      }
      for (Eigen::Index k = i + 1; k < rows; ++k) {
        max_diff2 = std::max(max_diff2, abs2<Real>(entries(i, j) - entries(k, j)));
      }
    }
  }
  return {sqrt(max_abs2), sqrt(max_diff2)};
}

template <class Real>
CMatrix<Real> evaluation_rows(const std::vector<SamplePoint<Real>>& points, const MonomialSet& ms) {
  CMatrix<Real> rows(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(ms.size()));
  if (ms.size() == 0) return rows;
  const std::size_t n = ms.monomials.front().nvars();
  std::vector<std::uint32_t> max_exp(n, 0);
  for (const auto& m : ms.monomials) {
    for (std::size_t v = 0; v < n; ++v) max_exp[v] = std::max(max_exp[v], m.exponents[v]);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].coords.size() != n) throw std::invalid_argument("point dimension mismatch");
    const auto table = power_table<Real>(points[i].coords, max_exp);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          monomial_value<Real>(ms.monomials[j], table);
    }
  }
  return rows;
}

template <class Real>
EvaluationMatrix<Real> build_matrix(std::vector<SamplePoint<Real>> points, MonomialSet ms) {
  if (ms.size() < 2) throw std::invalid_argument("reconstruction needs at least two monomials");
  if (points.size() != ms.size() - 1) {
    throw std::invalid_argument("need exactly m - 1 points for m monomials");
  }
  EvaluationMatrix<Real> em;
  em.entries = evaluation_rows<Real>(points, ms);
  const auto stats = monomial_stats<Real>(em.entries);
  em.M = stats.M;
  em.B = stats.B;
  em.points = std::move(points);
  em.monomials = std::move(ms);
  return em;
}

namespace detail {

template <class Real>
UniquenessReport<Real> rank_report(const Eigen::Matrix<Real, Eigen::Dynamic, 1>& sv) {
  UniquenessReport<Real> r;
  if (sv.size() == 0 || !(sv(0) > 0)) return r;
  const Real smallest = sv(sv.size() - 1);
  r.ratio = smallest / sv(0);
  r.unique = smallest > rank_tolerance(sv(0));
  return r;
}

}  // namespace detail

template <class Real>
UniquenessReport<Real> uniqueness_check(const EvaluationMatrix<Real>& em) {
  if (em.entries.rows() == 0) return {};
  Eigen::JacobiSVD<CMatrix<Real>> svd(em.entries);
  return detail::rank_report<Real>(svd.singularValues());
}

template <class Real>
CVector<Real> null_direction(const EvaluationMatrix<Real>& em) {
  Eigen::JacobiSVD<CMatrix<Real>> svd(em.entries, Eigen::ComputeFullV);
  const auto report = detail::rank_report<Real>(svd.singularValues());
  if (!report.unique) throw RankDeficient("interpolation matrix is rank deficient");
  return svd.matrixV().col(em.entries.cols() - 1);
}

template <class Real>
ApproxPolynomial<Real> reconstruct(const EvaluationMatrix<Real>& em) {
  const CVector<Real> v = null_direction(em);
  ApproxPolynomial<Real> g(em.monomials.monomials.front().nvars());
  for (std::size_t j = 0; j < em.monomials.size(); ++j) {
    g.set(em.monomials.monomials[j], v(static_cast<Eigen::Index>(j)));
  }
  return make_monic(g);
}

template <class Real>
CVector<Real> cofactor_coefficients(const EvaluationMatrix<Real>& em) {
  const auto m = em.entries.cols();
  CVector<Real> out(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    CMatrix<Real> minor(m - 1, m - 1);
    for (Eigen::Index j = 0, c = 0; j < m; ++j) {
      if (j == k) continue;
      minor.col(c++) = em.entries.col(j);
    }
    const Complex<Real> det = m == 1 ? Complex<Real>(Real(1)) : minor.partialPivLu().determinant();
    out(k) = (k % 2 == 0) ? det : -det;
  }
  return out;
}

template <class Real>
std::vector<std::size_t> select_rows(const CMatrix<Real>& rows, std::size_t count) {
  const auto n = static_cast<std::size_t>(rows.rows());
  if (count > n) throw std::invalid_argument("not enough candidate rows");
  CMatrix<Real> residual = rows;
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  for (std::size_t step = 0; step < count; ++step) {
    std::size_t best = n;
    Real best_norm(-1);
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const Real nr = residual.row(static_cast<Eigen::Index>(i)).squaredNorm();
      if (nr > best_norm) {
        best_norm = nr;
        best = i;
      }
    }
    taken[best] = true;
    chosen.push_back(best);
    if (!(best_norm > 0)) continue;
    const Eigen::Matrix<Complex<Real>, 1, Eigen::Dynamic> q =
        residual.row(static_cast<Eigen::Index>(best)) / sqrt(best_norm);
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const auto r = static_cast<Eigen::Index>(i);
      const Complex<Real> proj = residual.row(r).dot(q);  // sum conj(r_k) q_k
      residual.row(r) -= std::conj(proj) * q;
    }
  }
  return chosen;
}

}  // namespace varfactor

#define VARFACTOR_INSTANTIATE_INTERPOLATION(Real)                                                  \
  template varfactor::MonomialStats<Real> varfactor::monomial_stats<Real>(                          \
      const varfactor::CMatrix<Real>&);                                                             \
  template varfactor::CMatrix<Real> varfactor::evaluation_rows<Real>(                               \
      const std::vector<varfactor::SamplePoint<Real>>&, const varfactor::MonomialSet&);             \
  template varfactor::EvaluationMatrix<Real> varfactor::build_matrix<Real>(                         \
      std::vector<varfactor::SamplePoint<Real>>, varfactor::MonomialSet);                           \
  template varfactor::UniquenessReport<Real> varfactor::uniqueness_check<Real>(                     \
      const varfactor::EvaluationMatrix<Real>&);                                                    \
  template varfactor::CVector<Real> varfactor::null_direction<Real>(                                \
      const varfactor::EvaluationMatrix<Real>&);                                                    \
  template varfactor::ApproxPolynomial<Real> varfactor::reconstruct<Real>(                          \
      const varfactor::EvaluationMatrix<Real>&);                                                    \
  template varfactor::CVector<Real> varfactor::cofactor_coefficients<Real>(                         \
      const varfactor::EvaluationMatrix<Real>&);                                                    \
  template std::vector<std::size_t> varfactor::select_rows<Real>(const varfactor::CMatrix<Real>&,   \
                                                                 std::size_t);
