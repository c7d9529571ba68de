#include <algorithm>
#include <functional>

#include "varfactor/interpolation.hpp"

namespace varfactor {

MonomialSet monomial_candidates(unsigned max_degree, const DegreeProfile& caps) {
  const std::size_t n = caps.nvars();
  if (n == 0) throw std::invalid_argument("monomial_candidates needs at least one variable");
  MonomialSet out;
  Monomial current(n);
  // Depth-first over exponent vectors with remaining degree budget.
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t var, unsigned budget) {
    if (var == n) {
      out.monomials.push_back(current);
      return;
    }
    const unsigned cap = std::min<unsigned>(budget, caps.per_variable[var]);
    for (unsigned e = 0; e <= cap; ++e) {
      current.exponents[var] = e;
      walk(var + 1, budget - e);
    }
    current.exponents[var] = 0;
  };
  walk(0, max_degree);
  std::sort(out.monomials.begin(), out.monomials.end(), GrlexLess{});
  return out;
}

MonomialSet monomial_candidates(unsigned max_degree, std::size_t nvars) {
  DegreeProfile unrestricted;
  unrestricted.per_variable.assign(nvars, max_degree);
  unrestricted.total = max_degree;
  return monomial_candidates(max_degree, unrestricted);
}

}  // namespace varfactor
