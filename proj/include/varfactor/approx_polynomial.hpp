#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "varfactor/monomial.hpp"
#include "varfactor/rational_polynomial.hpp"
#include "varfactor/scalar.hpp"

namespace varfactor {

/// Sparse polynomial with complex coefficients at the precision of `Real`.
template <class Real>
class ApproxPolynomial {
 public:
  using Scalar = Complex<Real>;
  using Terms = std::map<Monomial, Scalar, GrlexGreater>;

  explicit ApproxPolynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static ApproxPolynomial from_rational(const RationalPolynomial& p) {
    ApproxPolynomial a(p.nvars());
    for (const auto& [m, c] : p.terms()) a.terms_.emplace(m, Scalar(to_real<Real>(c), Real(0)));
    return a;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  static constexpr int precision_bits() { return varfactor::precision_bits<Real>(); }

  void set(const Monomial& m, const Scalar& c) {
    if (m.nvars() != nvars_) throw std::invalid_argument("monomial dimension mismatch");
    terms_[m] = c;
  }

  void add(const Monomial& m, const Scalar& c) {
    if (m.nvars() != nvars_) throw std::invalid_argument("monomial dimension mismatch");
    terms_[m] += c;
  }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar() : it->second;
  }

  /// Largest coefficient modulus.
  Real max_abs() const {
    Real best(0);
    for (const auto& [m, c] : terms_) best = std::max(best, abs(c));
    return best;
  }

  Real max_imag() const {
    Real best(0);
    for (const auto& [m, c] : terms_) best = std::max(best, abs(c.imag()));
    return best;
  }

  /// Coefficient 2-norm.
  Real norm() const {
    Real s(0);
    for (const auto& [m, c] : terms_) s += abs2(c);
    return sqrt(s);
  }

  /// Terms whose modulus exceeds `rel_tol` times the largest modulus.
  std::vector<typename Terms::const_iterator> significant_terms(const Real& rel_tol) const {
    std::vector<typename Terms::const_iterator> out;
    const Real cutoff = rel_tol * max_abs();
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      if (abs(it->second) > cutoff) out.push_back(it);
    }
    return out;
  }

  /// Default threshold separating true coefficients from numerical noise.
  static Real noise_level() { return sqrt(unit_roundoff<Real>()); }

  /// Graded-lex leading monomial among the significant terms.
  const Monomial& leading_monomial() const {
    auto sig = significant_terms(noise_level());
    if (sig.empty()) throw std::domain_error("zero polynomial has no leading term");
    return sig.front()->first;
  }

  std::uint32_t total_degree() const {
    auto sig = significant_terms(noise_level());
    return sig.empty() ? 0 : sig.front()->first.degree();
  }

  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (auto it : significant_terms(noise_level())) d = std::max(d, it->first.exponents[var]);
    return d;
  }

  ApproxPolynomial conj() const {
    ApproxPolynomial out(nvars_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, std::conj(c));
    return out;
  }

  ApproxPolynomial real_part() const {
    ApproxPolynomial out(nvars_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, Scalar(c.real(), Real(0)));
    return out;
  }

  ApproxPolynomial& operator*=(const Scalar& s) {
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend ApproxPolynomial operator*(const ApproxPolynomial& a, const ApproxPolynomial& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial dimension mismatch");
    ApproxPolynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) r.terms_[ma * mb] += ca * cb;
    }
    return r;
  }

 private:
  std::size_t nvars_;
  Terms terms_;
};

/// Powers x_i^0..x_i^{max_exp[i]} of each coordinate.
template <class Real>
std::vector<std::vector<Complex<Real>>> power_table(std::span<const Complex<Real>> point,
                                                    std::span<const std::uint32_t> max_exp) {
  std::vector<std::vector<Complex<Real>>> table(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    table[i].reserve(max_exp[i] + 1);
    table[i].emplace_back(Real(1), Real(0));
    for (std::uint32_t e = 1; e <= max_exp[i]; ++e) table[i].push_back(table[i].back() * point[i]);
  }
  return table;
}

template <class Real>
Complex<Real> monomial_value(const Monomial& m, const std::vector<std::vector<Complex<Real>>>& table) {
  Complex<Real> v(Real(1), Real(0));
  for (std::size_t i = 0; i < m.nvars(); ++i) {
    if (m.exponents[i] != 0) v *= table[i][m.exponents[i]];
  }
  return v;
}

template <class Real>
Complex<Real> evaluate(const ApproxPolynomial<Real>& p, std::span<const Complex<Real>> point) {
  if (point.size() != p.nvars()) throw std::invalid_argument("point dimension mismatch");
  std::vector<std::uint32_t> max_exp(p.nvars(), 0);
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < m.nvars(); ++i) max_exp[i] = std::max(max_exp[i], m.exponents[i]);
  }
  const auto table = power_table<Real>(point, max_exp);
  Complex<Real> sum;
  for (const auto& [m, c] : p.terms()) sum += c * monomial_value<Real>(m, table);
  return sum;
}

template <class Real>
Complex<Real> evaluate(const RationalPolynomial& p, std::span<const Complex<Real>> point) {
  if (point.size() != p.nvars()) throw std::invalid_argument("point dimension mismatch");
  const auto dp = p.degree_profile();
  const auto table = power_table<Real>(point, dp.per_variable);
  Complex<Real> sum;
  for (const auto& [m, c] : p.terms()) sum += to_real<Real>(c) * monomial_value<Real>(m, table);
  return sum;
}

/// Sum of |c_i| |point^alpha_i|, the natural scale for a residual at `point`.
template <class Real>
Real evaluation_scale(const ApproxPolynomial<Real>& p, std::span<const Complex<Real>> point) {
  std::vector<std::uint32_t> max_exp(p.nvars(), 0);
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < m.nvars(); ++i) max_exp[i] = std::max(max_exp[i], m.exponents[i]);
  }
  const auto table = power_table<Real>(point, max_exp);
  Real sum(0);
  for (const auto& [m, c] : p.terms()) sum += abs(c) * abs(monomial_value<Real>(m, table));
  return sum;
}

/// Evaluation scale with every coordinate modulus raised to at least 1, so
/// it does not collapse when the point sits on coordinate hyperplanes.
template <class Real>
Real magnitude_scale(const ApproxPolynomial<Real>& p, std::span<const Complex<Real>> point) {
  std::vector<Complex<Real>> floored(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) floored[i] = Complex<Real>(std::max(Real(1), abs(point[i])));
  return evaluation_scale<Real>(p, floored);
}

/// Divides by the coefficient of the graded-lex leading significant monomial.
template <class Real>
ApproxPolynomial<Real> make_monic(const ApproxPolynomial<Real>& p) {
  const auto lead = p.coefficient(p.leading_monomial());
  ApproxPolynomial<Real> out = p;
  const Complex<Real> inv = Complex<Real>(Real(1), Real(0)) / lead;
  out *= inv;
  out.set(p.leading_monomial(), Complex<Real>(Real(1), Real(0)));
  return out;
}

/// ||f - g h||_2 over coefficients.
template <class Real>
Real residual_norm(const RationalPolynomial& f, const ApproxPolynomial<Real>& g,
                   const ApproxPolynomial<Real>& h) {
  auto diff = g * h;
  for (const auto& [m, c] : f.terms()) diff.add(m, Complex<Real>(-to_real<Real>(c), Real(0)));
  return diff.norm();
}

}  // namespace varfactor
