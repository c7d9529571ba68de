#pragma once

#include <string>
#include <vector>

#include "varfactor/rational_polynomial.hpp"

namespace testing_util {

inline varfactor::RationalPolynomial P(const std::string& text, const std::vector<std::string>& vars) {
  return varfactor::parse_poly(text, vars);
}

inline const std::vector<std::string> X{"x"};
inline const std::vector<std::string> XY{"x", "y"};
inline const std::vector<std::string> X12{"x1", "x2"};
inline const std::vector<std::string> X123{"x1", "x2", "x3"};

}  // namespace testing_util
