#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "varfactor/rational_polynomial.hpp"
#include "varfactor/rational_recovery.hpp"
#include "varfactor/sample_point.hpp"
#include "varfactor/scalar.hpp"

namespace varfactor {

/// Real box around a regular point, over every variable except the solve
/// variable (whose half-width is stored as zero).
template <class Real>
struct NeighborhoodBox {
  SamplePoint<Real> center;
  std::vector<Real> half_widths;
  std::size_t solve_var = 0;
};

/// Grid samples on one root branch plus the roots of the other branches found
/// at the same grid nodes.
template <class Real>
struct SampleSet {
  std::vector<SamplePoint<Real>> points;
  NeighborhoodBox<Real> box;
  std::vector<std::vector<Real>> grid;  ///< node coordinates per variable; empty for the solve variable
  std::vector<unsigned> counts;         ///< nodes per variable
  std::map<int, std::vector<SamplePoint<Real>>> siblings;
  std::vector<SamplePoint<Real>> seeds;
  int primary_tag = 0;
};

/// Last variable (in declaration order) that `f` depends on.
std::size_t default_solve_variable(const RationalPolynomial& f);

/// All complex roots of sum coeffs[k] x^k by simultaneous (Aberth) iteration,
/// polished to working precision. Every root satisfies
/// |p(z)| <= eps * sum |a_k| |z|^k. Roots are returned sorted by real then
/// imaginary part.
template <class Real>
std::vector<Complex<Real>> univariate_roots(std::span<const Complex<Real>> coeffs, const Real& eps);

/// True iff |df/dx_i (p)| > tol for every variable other than the solve
/// variable that f depends on.
template <class Real>
bool gradient_check(const RationalPolynomial& f, const SamplePoint<Real>& p, const Real& tol,
                    std::optional<std::size_t> solve_var = std::nullopt);

struct InitialPointOptions {
  std::optional<std::size_t> solve_var;
  int retry_cap = 16;
  /// When false, a root only needs df/dx_solve != 0 to serve as primary seed.
  bool require_gradient = true;
};

/// Specializes every non-solve variable to a uniform draw from [1, 2] and
/// returns all roots in the solve variable. The primary (tag 0) is the first
/// root that passes the regularity test; the others are tagged 1, 2, ...
template <class Real>
std::vector<SamplePoint<Real>> initial_points(const RationalPolynomial& f, std::mt19937_64& rng,
                                              const ErrorBudget& budget,
                                              const InitialPointOptions& options = {});

struct NeighborhoodOptions {
  std::optional<std::size_t> solve_var;
  /// Partials whose sign must stay fixed. Defaults to all non-solve variables
  /// f depends on, which requires p0 to pass gradient_check.
  std::optional<std::vector<std::size_t>> tracked;
  int probes = 32;
  int halving_cap = 40;
};

/// Box on which the tracked partial derivatives keep their sign at p0, found
/// by halving from h_i = 0.1 (1 + |x_i0|).
template <class Real>
NeighborhoodBox<Real> neighborhood(const RationalPolynomial& f, const SamplePoint<Real>& p0,
                                   std::mt19937_64& rng, const NeighborhoodOptions& options = {});

/// Samples an equispaced grid over the box (d_i + 1 nodes per variable by
/// default, or `counts`), solves for the solve variable at every node and
/// keeps the root closest to the center on the primary branch. Remaining
/// roots are filed under the branch of the nearest seed.
template <class Real>
SampleSet<Real> sample_variety(const RationalPolynomial& f, const NeighborhoodBox<Real>& box,
                               const DegreeProfile& dp, const ErrorBudget& budget,
                               std::span<const SamplePoint<Real>> seeds = {},
                               std::vector<unsigned> counts = {});

/// The same samples with branch `tag` as the primary set.
template <class Real>
SampleSet<Real> branch_view(const SampleSet<Real>& ss, int tag);

}  // namespace varfactor
