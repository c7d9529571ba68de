#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <array>
#include <complex>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace varfactor {

namespace bmp = boost::multiprecision;

/// Fixed-precision MPFR float. Expression templates are off so the type
/// behaves as a plain value inside std::complex and Eigen.
template <unsigned Digits10>
using MpFloat = bmp::number<bmp::mpfr_float_backend<Digits10>, bmp::et_off>;

using Float128 = MpFloat<38>;
using Float256 = MpFloat<77>;
using Float512 = MpFloat<154>;
using Float1024 = MpFloat<308>;

template <class Real>
using Complex = std::complex<Real>;

/// Nominal working precisions, in bits, that the engine is instantiated for.
inline constexpr std::array<int, 4> kPrecisionTiers = {128, 256, 512, 1024};

template <class Real>
constexpr int precision_bits() {
  return std::numeric_limits<Real>::digits;
}

/// 2^-p for a p-bit significand.
template <class Real>
Real unit_roundoff() {
  return ldexp(Real(1), -precision_bits<Real>());
}

template <class Real>
Real to_real(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

template <class Real>
Real to_real(const mpz_class& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

template <class Real>
mpz_class floor_to_integer(const Real& x) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDD);
  return z;
}

/// |z|^2 without the square root.
template <class Real>
Real abs2(const Complex<Real>& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

/// Smallest tier that holds `bits`; throws if none does.
inline int tier_for(int bits) {
  for (int t : kPrecisionTiers) {
    if (bits <= t) return t;
  }
  throw std::out_of_range("precision above " + std::to_string(kPrecisionTiers.back()) + " bits");
}

/// Calls `fn(std::type_identity<Real>{})` with the Real type of the tier
/// covering `bits`.
template <class Fn>
decltype(auto) with_precision(int bits, Fn&& fn) {
  switch (tier_for(bits)) {
    case 128:
      return fn(std::type_identity<Float128>{});
    case 256:
      return fn(std::type_identity<Float256>{});
    case 512:
      return fn(std::type_identity<Float512>{});
    default:
      return fn(std::type_identity<Float1024>{});
  }
}

}  // namespace varfactor
