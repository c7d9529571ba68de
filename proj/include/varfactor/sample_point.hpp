#pragma once

#include <vector>

#include "varfactor/scalar.hpp"

namespace varfactor {

/// Approximate point on V(f), tagged with the root branch it was seeded from.
template <class Real>
struct SamplePoint {
  std::vector<Complex<Real>> coords;
  Real residual{0};
  int variety_tag = 0;

  SamplePoint conj() const {
    SamplePoint out = *this;
    for (auto& c : out.coords) c = std::conj(c);
    return out;
  }
};

}  // namespace varfactor
