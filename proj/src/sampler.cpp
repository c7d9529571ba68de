#include "varfactor/sampler.hpp"

#include <stdexcept>

namespace varfactor {

std::size_t default_solve_variable(const RationalPolynomial& f) {
  for (std::size_t i = f.nvars(); i-- > 0;) {
    if (f.depends_on(i)) return i;
  }
  throw std::domain_error("constant polynomial has no solve variable");
}

}  // namespace varfactor
