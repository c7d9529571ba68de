#pragma once

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "varfactor/approx_polynomial.hpp"
#include "varfactor/errors.hpp"
#include "varfactor/sampler.hpp"

namespace varfactor {
namespace detail {

/// f viewed as a univariate polynomial in the solve variable with
/// coefficients depending on the remaining coordinates.
template <class Real>
class Slicer {
 public:
  Slicer(const RationalPolynomial& f, std::size_t solve_var) : solve_var_(solve_var) {
    for (const auto& c : f.coefficients_in(solve_var)) {
      coeffs_.push_back(ApproxPolynomial<Real>::from_rational(c));
    }
  }

  std::size_t solve_var() const { return solve_var_; }
  std::size_t degree() const { return coeffs_.size() - 1; }

  /// Univariate coefficients (ascending powers) with the other coordinates
  /// taken from `coords`.
  std::vector<Complex<Real>> at(std::span<const Complex<Real>> coords) const {
    std::vector<Complex<Real>> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(evaluate<Real>(c, coords));
    return out;
  }

 private:
  std::size_t solve_var_;
  std::vector<ApproxPolynomial<Real>> coeffs_;
};

template <class Real>
struct HornerResult {
  Complex<Real> value;
  Complex<Real> derivative;
};

template <class Real>
HornerResult<Real> horner(std::span<const Complex<Real>> a, const Complex<Real>& z) {
  Complex<Real> p = a.back();
  Complex<Real> dp;
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
  return {p, dp};
}

template <class Real>
Real backward_scale(std::span<const Complex<Real>> a, const Complex<Real>& z) {
  const Real r = abs(z);
  Real s(0);
  Real pw(1);
  for (const auto& c : a) {
    s += abs(c) * pw;
    pw *= r;
  }
  return s;
}

/// Newton iteration on the univariate slice, started at z0.
template <class Real>
std::optional<Complex<Real>> newton_track(std::span<const Complex<Real>> a, Complex<Real> z,
                                          int max_iter = 60) {
  const Real tol = ldexp(unit_roundoff<Real>(), 24);
  for (int it = 0; it < max_iter; ++it) {
    const auto [p, dp] = horner<Real>(a, z);
    if (p == Complex<Real>()) return z;
    if (dp == Complex<Real>()) return std::nullopt;
    const Complex<Real> step = p / dp;
    z -= step;
    if (abs(step) <= tol * (Real(1) + abs(z))) return z;
  }
  return std::nullopt;
}

template <class Real>
bool less_complex(const Complex<Real>& a, const Complex<Real>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

template <class Real>
Real default_residual_tol(const RationalPolynomial& f, std::span<const Complex<Real>> coords) {
  const auto af = ApproxPolynomial<Real>::from_rational(f);
  return ldexp(unit_roundoff<Real>(), 32) * magnitude_scale<Real>(af, coords);
}

template <class Real>
Real residual_tolerance(const RationalPolynomial& f, std::span<const Complex<Real>> coords,
                        const ErrorBudget& budget) {
  if (budget.eps) return Real(static_cast<double>(*budget.eps));
  return default_residual_tol<Real>(f, coords);
}

/// |df/dx_i| relative threshold used to judge partial derivatives as nonzero.
template <class Real>
bool partial_nonzero(const RationalPolynomial& f, std::size_t var, std::span<const Complex<Real>> coords,
                     const Real& rel_tol) {
  const auto d = ApproxPolynomial<Real>::from_rational(partial_derivative(f, var));
  const Real scale = magnitude_scale<Real>(d, coords);
  return abs(evaluate<Real>(d, coords)) > rel_tol * scale;
}

}  // namespace detail

template <class Real>
std::vector<Complex<Real>> univariate_roots(std::span<const Complex<Real>> coeffs, const Real& eps) {
  std::vector<Complex<Real>> a(coeffs.begin(), coeffs.end());
  while (!a.empty() && a.back() == Complex<Real>()) a.pop_back();
  if (a.empty()) throw std::domain_error("univariate_roots: zero polynomial");
  if (a.size() == 1) throw std::domain_error("univariate_roots: degree must be at least 1");

  // Exact zero roots are split off; the backward-error test is meaningless at 0.
  std::size_t zeros = 0;
  while (a[zeros] == Complex<Real>()) ++zeros;
  a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(zeros));
  const std::size_t n = a.size() - 1;

  std::vector<Complex<Real>> z(n);
  if (n == 0) {
    // only zero roots
  } else if (n == 1) {
    z[0] = -a[0] / a[1];
  } else {
    // Start on a perturbed circle whose radius is the geometric mean of the
    // root moduli (or a Fujiwara-type bound when the constant term vanishes).
    const double lead = static_cast<double>(log(abs(a[n])));
    double log_radius;
    if (a[0] != Complex<Real>()) {
      log_radius = (static_cast<double>(log(abs(a[0]))) - lead) / static_cast<double>(n);
    } else {
      log_radius = -1e300;
      for (std::size_t k = 1; k <= n; ++k) {
        if (a[n - k] == Complex<Real>()) continue;
        log_radius = std::max(log_radius, (static_cast<double>(log(abs(a[n - k]))) - lead) / static_cast<double>(k));
      }
      log_radius += std::log(2.0);
    }
    const Real radius = exp(Real(log_radius));
    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    for (std::size_t k = 0; k < n; ++k) {
      const Real angle = two_pi * Real(k) / Real(n) + Real(0.7);
      const Real r = radius * (Real(1) + Real(k % 3) / Real(64));
      z[k] = Complex<Real>(r * cos(angle), r * sin(angle));
    }

    const Real tol = ldexp(unit_roundoff<Real>(), 8);
    const Real noise = ldexp(unit_roundoff<Real>(), 4);
    std::vector<bool> done(n, false);
    constexpr int kIterationCap = 200;
    int iter = 0;
    for (; iter < kIterationCap; ++iter) {
      bool all_done = true;
      for (std::size_t k = 0; k < n; ++k) {
        if (done[k]) continue;
        const auto [p, dp] = detail::horner<Real>(a, z[k]);
        // At the rounding-noise floor further corrections only wander.
        if (abs(p) <= noise * detail::backward_scale<Real>(a, z[k])) {
          done[k] = true;
          continue;
        }
        Complex<Real> sum;
        for (std::size_t j = 0; j < n; ++j) {
          if (j != k) sum += Complex<Real>(Real(1)) / (z[k] - z[j]);
        }
        const Complex<Real> w = p / dp;
        const Complex<Real> corr = w / (Complex<Real>(Real(1)) - w * sum);
        z[k] -= corr;
        if (abs(corr) <= tol * std::max(Real(1), abs(z[k]))) {
          done[k] = true;
        } else {
          all_done = false;
        }
      }
      if (all_done) break;
    }
    if (iter == kIterationCap) throw RootSolveFailure("root iteration did not converge");
  }

  for (auto& root : z) {
    for (int polish = 0; polish < 2; ++polish) {
      const auto [p, dp] = detail::horner<Real>(a, root);
      if (dp == Complex<Real>() || p == Complex<Real>()) break;
      root -= p / dp;
    }
    const auto [p, dp] = detail::horner<Real>(a, root);
    if (abs(p) > eps * detail::backward_scale<Real>(a, root)) {
      throw RootSolveFailure("root backward error above tolerance");
    }
  }
  z.insert(z.end(), zeros, Complex<Real>());
  std::sort(z.begin(), z.end(), detail::less_complex<Real>);
  return z;
}

template <class Real>
bool gradient_check(const RationalPolynomial& f, const SamplePoint<Real>& p, const Real& tol,
                    std::optional<std::size_t> solve_var) {
  if (p.coords.size() != f.nvars()) throw std::invalid_argument("point dimension mismatch");
  const std::size_t s = solve_var ? *solve_var : default_solve_variable(f);
  for (std::size_t i = 0; i < f.nvars(); ++i) {
    if (i == s || !f.depends_on(i)) continue;
    const auto d = partial_derivative(f, i);
    if (!(abs(evaluate<Real>(d, p.coords)) > tol)) return false;
  }
  return true;
}

template <class Real>
std::vector<SamplePoint<Real>> initial_points(const RationalPolynomial& f, std::mt19937_64& rng,
                                              const ErrorBudget& budget,
                                              const InitialPointOptions& options) {
  const std::size_t s = options.solve_var ? *options.solve_var : default_solve_variable(f);
  if (!f.depends_on(s)) throw std::domain_error("polynomial is constant in the solve variable");
  const detail::Slicer<Real> slicer(f, s);
  const Real rel_tol = ApproxPolynomial<Real>::noise_level();
  const Real root_eps = ldexp(unit_roundoff<Real>(), 32);
  std::uniform_real_distribution<double> draw(1.0, 2.0);

  for (int attempt = 0; attempt <= options.retry_cap; ++attempt) {
    std::vector<Complex<Real>> base(f.nvars());
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      if (i != s) base[i] = Complex<Real>(Real(draw(rng)));
    }
    const auto coeffs = slicer.at(base);
    if (coeffs.back() == Complex<Real>()) continue;
    std::vector<Complex<Real>> roots;
    try {
      roots = univariate_roots<Real>(coeffs, root_eps);
    } catch (const RootSolveFailure&) {
      continue;
    }

    std::vector<SamplePoint<Real>> points;
    std::optional<std::size_t> primary;
    for (const auto& root : roots) {
      SamplePoint<Real> p;
      p.coords = base;
      p.coords[s] = root;
      p.residual = abs(evaluate<Real>(f, p.coords));
      if (p.residual > detail::residual_tolerance<Real>(f, p.coords, budget)) {
        throw RootSolveFailure("seed residual above tolerance");
      }
      if (!primary) {
        const bool regular = options.require_gradient
                                 ? gradient_check<Real>(f, p, rel_tol * detail::default_residual_tol<Real>(f, p.coords) /
                                                                  ldexp(unit_roundoff<Real>(), 32), s)
                                 : detail::partial_nonzero<Real>(f, s, p.coords, rel_tol);
        if (regular && detail::partial_nonzero<Real>(f, s, p.coords, rel_tol)) primary = points.size();
      }
      points.push_back(std::move(p));
    }
    if (!primary) continue;

    std::rotate(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(*primary),
                points.begin() + static_cast<std::ptrdiff_t>(*primary) + 1);
    for (std::size_t k = 0; k < points.size(); ++k) points[k].variety_tag = static_cast<int>(k);
    return points;
  }
  throw NoRegularPoint();
}

template <class Real>
NeighborhoodBox<Real> neighborhood(const RationalPolynomial& f, const SamplePoint<Real>& p0,
                                   std::mt19937_64& rng, const NeighborhoodOptions& options) {
  const std::size_t n = f.nvars();
  if (p0.coords.size() != n) throw std::invalid_argument("point dimension mismatch");
  const std::size_t s = options.solve_var ? *options.solve_var : default_solve_variable(f);
  const Real rel_tol = ApproxPolynomial<Real>::noise_level();

  std::vector<std::size_t> tracked;
  if (options.tracked) {
    tracked = *options.tracked;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == s || !f.depends_on(i)) continue;
      if (!detail::partial_nonzero<Real>(f, i, p0.coords, rel_tol)) throw NoRegularPoint();
      tracked.push_back(i);
    }
  }

  // Sign reference: the dominant (real or imaginary) part of each partial at p0.
  std::vector<ApproxPolynomial<Real>> partials;
  std::vector<bool> use_real;
  std::vector<bool> positive;
  for (auto i : tracked) {
    partials.push_back(ApproxPolynomial<Real>::from_rational(partial_derivative(f, i)));
    const auto v = evaluate<Real>(partials.back(), p0.coords);
    const bool re = abs(v.real()) >= abs(v.imag());
    use_real.push_back(re);
    positive.push_back((re ? v.real() : v.imag()) > 0);
  }

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != s && f.depends_on(i)) active.push_back(i);
  }

  NeighborhoodBox<Real> box;
  box.center = p0;
  box.solve_var = s;
  box.half_widths.assign(n, Real(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (i != s) box.half_widths[i] = (Real(1) + abs(p0.coords[i])) / 10;
  }

  const detail::Slicer<Real> slicer(f, s);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t corner_dims = std::min<std::size_t>(active.size(), 10);

  auto probe_ok = [&](const std::vector<double>& offsets) {
    std::vector<Complex<Real>> coords = p0.coords;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const auto i = active[k];
      coords[i] += Complex<Real>(box.half_widths[i] * Real(offsets[k]));
    }
    const auto slice = slicer.at(coords);
    const auto root = detail::newton_track<Real>(slice, p0.coords[s]);
    if (!root) return false;
    coords[s] = *root;
    for (std::size_t t = 0; t < partials.size(); ++t) {
      const auto v = evaluate<Real>(partials[t], coords);
      const Real part = use_real[t] ? v.real() : v.imag();
      if (part == 0 || (part > 0) != positive[t]) return false;
    }
    return true;
  };

  for (int halving = 0; halving <= options.halving_cap; ++halving) {
    bool stable = true;
    for (int k = 0; k < options.probes && stable; ++k) {
      std::vector<double> offsets(active.size());
      for (auto& o : offsets) o = unit(rng);
      stable = probe_ok(offsets);
    }
    for (std::size_t mask = 0; stable && mask < (std::size_t{1} << corner_dims); ++mask) {
      std::vector<double> offsets(active.size(), 0.0);
      for (std::size_t k = 0; k < corner_dims; ++k) offsets[k] = (mask >> k) & 1 ? 1.0 : -1.0;
      stable = probe_ok(offsets);
    }
    if (stable) return box;
    for (auto& h : box.half_widths) h /= 2;
  }
  throw NoStableNeighborhood();
}

template <class Real>
SampleSet<Real> sample_variety(const RationalPolynomial& f, const NeighborhoodBox<Real>& box,
                               const DegreeProfile& dp, const ErrorBudget& budget,
                               std::span<const SamplePoint<Real>> seeds, std::vector<unsigned> counts) {
  const std::size_t n = f.nvars();
  const std::size_t s = box.solve_var;
  if (box.center.coords.size() != n || dp.nvars() != n) throw std::invalid_argument("dimension mismatch");

  SampleSet<Real> ss;
  ss.box = box;
  ss.primary_tag = box.center.variety_tag;
  if (seeds.empty()) {
    ss.seeds.push_back(box.center);
  } else {
    ss.seeds.assign(seeds.begin(), seeds.end());
  }

  if (counts.empty()) {
    counts.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) counts[i] = i == s ? 0 : dp.per_variable[i] + 1;
  }
  counts[s] = 0;
  ss.counts = counts;
  ss.grid.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    if (i == s) continue;
    const unsigned c = std::max(1u, counts[i]);
    const Real center = box.center.coords[i].real();
    if (c == 1) {
      ss.grid[i].push_back(center);
      continue;
    }
    if (!(box.half_widths[i] > 0)) throw DegenerateSampling("duplicate grid nodes");
    for (unsigned k = 0; k < c; ++k) {
      ss.grid[i].push_back(center - box.half_widths[i] + 2 * box.half_widths[i] * Real(k) / Real(c - 1));
    }
    if (!(ss.grid[i][1] > ss.grid[i][0])) throw DegenerateSampling("duplicate grid nodes");
  }

  const detail::Slicer<Real> slicer(f, s);
  const Real root_eps = ldexp(unit_roundoff<Real>(), 32);
  // Each branch is followed by its tangent plane at the seed; the root
  // closest to that prediction is taken at every node.
  auto slopes_at = [&](const SamplePoint<Real>& p) {
    std::vector<Complex<Real>> slope(n);
    const auto fs = evaluate<Real>(partial_derivative(f, s), p.coords);
    if (fs == Complex<Real>()) return slope;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != s && f.depends_on(i)) slope[i] = -evaluate<Real>(partial_derivative(f, i), p.coords) / fs;
    }
    return slope;
  };
  auto predict = [&](const SamplePoint<Real>& p, const std::vector<Complex<Real>>& slope,
                     const std::vector<Complex<Real>>& at) {
    Complex<Real> z = p.coords[s];
    for (std::size_t i = 0; i < n; ++i) {
      if (i != s) z += slope[i] * (at[i] - p.coords[i]);
    }
    return z;
  };
  const auto center_slope = slopes_at(box.center);
  std::vector<std::vector<Complex<Real>>> seed_slopes;
  for (const auto& seed : ss.seeds) seed_slopes.push_back(slopes_at(seed));

  std::vector<std::size_t> index(n, 0);
  while (true) {
    std::vector<Complex<Real>> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != s) coords[i] = Complex<Real>(ss.grid[i][index[i]]);
    }
    const auto slice = slicer.at(coords);
    auto roots = univariate_roots<Real>(slice, root_eps);

    const Complex<Real> anchor = predict(box.center, center_slope, coords);
    std::size_t best = 0;
    Real d1(-1), d2(-1);
    for (std::size_t k = 0; k < roots.size(); ++k) {
      const Real d = abs(roots[k] - anchor);
      if (d1 < 0 || d < d1) {
        d2 = d1;
        d1 = d;
        best = k;
      } else if (d2 < 0 || d < d2) {
        d2 = d;
      }
    }
    if (d2 >= 0 && d2 < Real(101) * d1 / 100) throw BranchAmbiguity("branch ambiguity");

    auto make_point = [&](const Complex<Real>& root, int tag) {
      SamplePoint<Real> p;
      p.coords = coords;
      p.coords[s] = root;
      p.residual = abs(evaluate<Real>(f, p.coords));
      p.variety_tag = tag;
      if (p.residual > detail::residual_tolerance<Real>(f, p.coords, budget)) {
        throw RootSolveFailure("sample residual above tolerance");
      }
      return p;
    };
    ss.points.push_back(make_point(roots[best], ss.primary_tag));
    roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(best));

    for (std::size_t q = 0; q < ss.seeds.size(); ++q) {
      const auto& seed = ss.seeds[q];
      if (seed.variety_tag == ss.primary_tag || roots.empty()) continue;
      const Complex<Real> target = predict(seed, seed_slopes[q], coords);
      std::size_t pick = 0;
      for (std::size_t k = 1; k < roots.size(); ++k) {
        if (abs(roots[k] - target) < abs(roots[pick] - target)) pick = k;
      }
      ss.siblings[seed.variety_tag].push_back(make_point(roots[pick], seed.variety_tag));
      roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    // Advance the mixed-radix node index over the non-solve variables.
    std::size_t v = n;
    while (v-- > 0) {
      if (v == s) continue;
      if (++index[v] < ss.grid[v].size()) break;
      index[v] = 0;
    }
    if (v == static_cast<std::size_t>(-1)) break;
  }
  return ss;
}

template <class Real>
SampleSet<Real> branch_view(const SampleSet<Real>& ss, int tag) {
  if (tag == ss.primary_tag) return ss;
  auto it = ss.siblings.find(tag);
  if (it == ss.siblings.end()) throw std::out_of_range("no samples for branch " + std::to_string(tag));
  SampleSet<Real> out = ss;
  out.points = it->second;
  out.siblings.erase(tag);
  out.siblings[ss.primary_tag] = ss.points;
  out.primary_tag = tag;
  return out;
}

}  // namespace varfactor

#define VARFACTOR_INSTANTIATE_SAMPLER(Real)                                                         \
  template std::vector<varfactor::Complex<Real>> varfactor::univariate_roots<Real>(                 \
      std::span<const varfactor::Complex<Real>>, const Real&);                                      \
  template bool varfactor::gradient_check<Real>(const varfactor::RationalPolynomial&,               \
                                                const varfactor::SamplePoint<Real>&, const Real&,   \
                                                std::optional<std::size_t>);                        \
  template std::vector<varfactor::SamplePoint<Real>> varfactor::initial_points<Real>(              \
      const varfactor::RationalPolynomial&, std::mt19937_64&, const varfactor::ErrorBudget&,        \
      const varfactor::InitialPointOptions&);                                                       \
  template varfactor::NeighborhoodBox<Real> varfactor::neighborhood<Real>(                          \
      const varfactor::RationalPolynomial&, const varfactor::SamplePoint<Real>&, std::mt19937_64&,  \
      const varfactor::NeighborhoodOptions&);                                                       \
  template varfactor::SampleSet<Real> varfactor::sample_variety<Real>(                              \
      const varfactor::RationalPolynomial&, const varfactor::NeighborhoodBox<Real>&,                \
      const varfactor::DegreeProfile&, const varfactor::ErrorBudget&,                               \
      std::span<const varfactor::SamplePoint<Real>>, std::vector<unsigned>);                        \
  template varfactor::SampleSet<Real> varfactor::branch_view<Real>(const varfactor::SampleSet<Real>&, int);
