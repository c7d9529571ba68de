#include "varfactor/monomial.hpp"

#include <numeric>
#include <stdexcept>

namespace varfactor {

std::uint32_t Monomial::degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), std::uint32_t{0});
}

Monomial Monomial::variable(std::size_t nvars, std::size_t var, std::uint32_t power) {
  Monomial m(nvars);
  m.exponents.at(var) = power;
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > other.exponents[i]) return false;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("monomial dimension mismatch");
  Monomial r(a.nvars());
  for (std::size_t i = 0; i < a.nvars(); ++i) r.exponents[i] = a.exponents[i] + b.exponents[i];
  return r;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da < db;
  return a.exponents < b.exponents;
}

bool DegreeProfile::admits(const Monomial& m) const {
  if (m.degree() > total) return false;
  for (std::size_t i = 0; i < per_variable.size(); ++i) {
    if (m.exponents[i] > per_variable[i]) return false;
  }
  return true;
}

}  // namespace varfactor
