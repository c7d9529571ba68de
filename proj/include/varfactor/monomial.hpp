#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace varfactor {

/// Exponent vector x1^e1 * ... * xn^en.
struct Monomial {
  std::vector<std::uint32_t> exponents;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exponents(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> e) : exponents(std::move(e)) {}

  std::size_t nvars() const { return exponents.size(); }
  std::uint32_t degree() const;
  bool is_one() const { return degree() == 0; }

  /// Unit vector for variable `var`, raised to `power`.
  static Monomial variable(std::size_t nvars, std::size_t var, std::uint32_t power = 1);

  bool divides(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic order with x1 > x2 > ... > xn.
bool grlex_less(const Monomial& a, const Monomial& b);

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(a, b); }
};

/// Leading term first.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(b, a); }
};

/// Per-variable degrees and total degree of a polynomial.
struct DegreeProfile {
  std::vector<std::uint32_t> per_variable;
  std::uint32_t total = 0;

  std::size_t nvars() const { return per_variable.size(); }
  bool admits(const Monomial& m) const;
};

}  // namespace varfactor
