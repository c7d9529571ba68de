#pragma once

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "varfactor/detail/interpolation_impl.hpp"
#include "varfactor/detail/sampler_impl.hpp"
#include "varfactor/engine.hpp"
#include "varfactor/errors.hpp"

namespace varfactor {

namespace detail {

template <class Real>
Real complex_threshold(const ApproxPolynomial<Real>& g, const ErrorBudget& budget) {
  const Real noise = ApproxPolynomial<Real>::noise_level() * std::max(Real(1), g.max_abs());
  return std::min(to_real<Real>(budget.beta), noise);
}

/// |p(x)| relative to the evaluation scale of p at x.
template <class Real>
Real relative_value(const ApproxPolynomial<Real>& p, std::span<const Complex<Real>> x) {
  const Real scale = magnitude_scale<Real>(p, x);
  if (!(scale > 0)) return Real(0);
  return abs(evaluate<Real>(p, x)) / scale;
}

template <class Real>
Real relative_value(const RationalPolynomial& p, std::span<const Complex<Real>> x) {
  return relative_value<Real>(ApproxPolynomial<Real>::from_rational(p), x);
}

/// Tolerance used to decide whether a reconstruction really vanishes on the
/// held-out samples: u^(1/4).
template <class Real>
Real fit_tolerance() {
  return sqrt(ApproxPolynomial<Real>::noise_level());
}

inline void check_deadline(const FactorConfig& config) {
  if (config.deadline && std::chrono::steady_clock::now() > *config.deadline) throw Timeout();
}

}  // namespace detail

template <class Real>
CandidateFactor<Real> extract_candidate(const RationalPolynomial& f, const SampleSet<Real>& ss, unsigned m_deg,
                                        const ErrorBudget& budget) {
  if (m_deg < 1) throw std::invalid_argument("candidate degree must be at least 1");
  const DegreeProfile dp = f.degree_profile();
  const MonomialSet ms = candidate_monomials(m_deg, dp);
  const std::size_t m = ms.size();
  if (m < 2) throw DegenerateSampling("candidate monomial set too small");

  std::size_t active = 0;
  for (std::size_t i = 0; i < f.nvars(); ++i) {
    if (i != ss.box.solve_var && f.depends_on(i)) ++active;
  }
  if (ss.points.size() < points_needed(m, active)) throw DegenerateSampling("too few sample points");

  CMatrix<Real> rows = evaluation_rows<Real>(ss.points, ms);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const Real nr = rows.row(i).norm();
    if (nr > 0) rows.row(i) /= nr;
  }
  const auto chosen = select_rows<Real>(rows, m - 1);
  std::vector<bool> used(ss.points.size(), false);
  std::vector<SamplePoint<Real>> selected;
  for (auto i : chosen) {
    used[i] = true;
    selected.push_back(ss.points[i]);
  }

  const EvaluationMatrix<Real> em = build_matrix<Real>(selected, ms);
  ApproxPolynomial<Real> g;
  try {
    g = reconstruct<Real>(em);
  } catch (const RankDeficient&) {
    throw DegenerateSampling("sample points are not proper interpolation points");
  }

  CandidateFactor<Real> c;
  c.branch_tags.insert(ss.primary_tag);
  for (std::size_t i = 0; i < ss.points.size(); ++i) {
    if (!used[i]) c.fit_error = std::max(c.fit_error, detail::relative_value<Real>(g, ss.points[i].coords));
  }
  for (const auto& p : selected) {
    c.point_residual = std::max(c.point_residual, abs(evaluate<Real>(f, p.coords)));
  }
  const Integer L = budget.L < 2 ? Integer(2) : budget.L;
  const auto ce = control_error<Real>(L, static_cast<unsigned>(m), std::max(em.M, Real(1)),
                                      em.B > 0 ? em.B : Real(1));
  c.control_eps = ce.eps;
  c.required_bits = ce.precision_bits;
  c.points = std::move(selected);

  if (g.max_imag() > detail::complex_threshold<Real>(g, budget)) {
    c.status = CandidateStatus::complex;
    c.poly = std::move(g);
  } else {
    c.status = CandidateStatus::real;
    c.poly = g.real_part();
  }
  return c;
}

template <class Real>
CandidateFactor<Real> pair_conjugate(const CandidateFactor<Real>& g, const ErrorBudget& budget) {
  if (g.status != CandidateStatus::complex) throw std::invalid_argument("pair_conjugate needs a complex candidate");
  if (g.points.empty()) throw ConjugatePairingFailed("candidate carries no support points");

  MonomialSet ms;
  for (const auto& [mono, coef] : g.poly.terms()) ms.monomials.push_back(mono);
  std::sort(ms.monomials.begin(), ms.monomials.end(), GrlexLess{});
  std::vector<SamplePoint<Real>> conj_points;
  for (const auto& p : g.points) conj_points.push_back(p.conj());

  ApproxPolynomial<Real> gbar;
  try {
    gbar = reconstruct<Real>(build_matrix<Real>(conj_points, ms));
  } catch (const RankDeficient&) {
    throw ConjugatePairingFailed("conjugate branch is not uniquely interpolable");
  } catch (const std::invalid_argument&) {
    throw ConjugatePairingFailed("conjugate support does not match the monomial set");
  }

  ApproxPolynomial<Real> product = make_monic(g.poly * gbar);
  const Real limit = 10 * to_real<Real>(budget.beta);
  if (product.max_imag() > std::min(limit, ApproxPolynomial<Real>::noise_level() * product.max_abs())) {
    throw ConjugatePairingFailed("conjugate product is not real");
  }

  CandidateFactor<Real> out = g;
  out.poly = product.real_part();
  out.status = CandidateStatus::real;
  for (int t : g.branch_tags) out.branch_tags.insert(-1 - t);
  out.points.insert(out.points.end(), conj_points.begin(), conj_points.end());
  return out;
}

template <class Real>
DivisionResult<Real> approx_divide(const RationalPolynomial& f, const CandidateFactor<Real>& g) {
  using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  const auto df = f.total_degree();
  const auto dg = g.poly.total_degree();
  if (dg > df) throw std::invalid_argument("candidate degree exceeds the polynomial degree");

  DivisionResult<Real> out;
  out.h = ApproxPolynomial<Real>(f.nvars());
  const auto f_approx = ApproxPolynomial<Real>::from_rational(f);

  DegreeProfile caps;
  caps.total = df - dg;
  for (std::size_t v = 0; v < f.nvars(); ++v) {
    const auto fv = f.degree_in(v);
    const auto gv = g.poly.degree_in(v);
    if (gv > fv) {
      out.r = f_approx.norm();
      return out;
    }
    caps.per_variable.push_back(fv - gv);
  }
  const MonomialSet hm = monomial_candidates(df - dg, caps);

  std::vector<std::pair<Monomial, Real>> g_terms;
  for (auto it : g.poly.significant_terms(ApproxPolynomial<Real>::noise_level())) {
    g_terms.emplace_back(it->first, it->second.real());
  }

  std::map<Monomial, Eigen::Index, GrlexGreater> row_of;
  for (const auto& [mono, c] : f.terms()) row_of.emplace(mono, 0);
  for (const auto& [a, ga] : g_terms) {
    for (const auto& b : hm.monomials) row_of.emplace(a * b, 0);
  }
  Eigen::Index next = 0;
  for (auto& [mono, idx] : row_of) idx = next++;

  RMatrix A = RMatrix::Zero(next, static_cast<Eigen::Index>(hm.size()));
  RVector rhs = RVector::Zero(next);
  for (const auto& [mono, c] : f.terms()) rhs(row_of.at(mono)) = to_real<Real>(c);
  for (std::size_t j = 0; j < hm.size(); ++j) {
    for (const auto& [a, ga] : g_terms) A(row_of.at(a * hm.monomials[j]), static_cast<Eigen::Index>(j)) += ga;
  }

  const RVector x = A.colPivHouseholderQr().solve(rhs);
  out.r = (A * x - rhs).norm();
  for (std::size_t j = 0; j < hm.size(); ++j) {
    out.h.set(hm.monomials[j], Complex<Real>(x(static_cast<Eigen::Index>(j)), Real(0)));
  }
  return out;
}

template <class Real>
Real accept_tolerance(const RationalPolynomial& f, const ErrorBudget& budget) {
  const Real norm = ApproxPolynomial<Real>::from_rational(f).norm();
  const Real numeric = ldexp(unit_roundoff<Real>(), 24) * norm;
  const Real recovery = to_real<Real>(budget.beta) * norm * sqrt(Real(static_cast<double>(f.size())));
  return std::max(numeric, recovery);
}

template <class Real>
VerifyOutcome rationalize_verify(const RationalPolynomial& f, const CandidateFactor<Real>& g,
                                 const ApproxPolynomial<Real>& h, const Integer& L) {
  VerifyOutcome out;
  out.kind = VerifyOutcome::Kind::real_only;
  try {
    out.g = recover_coefficients<Real>(g.poly, L);
    out.h = recover_coefficients<Real>(h, L);
  } catch (const NumericalFailure&) {
    return out;
  }
  if (out.g.is_constant() || out.h.is_zero()) return out;
  if (out.g * out.h == f) out.kind = VerifyOutcome::Kind::exact;
  return out;
}

template <class Real>
RecombineResult recombine(const std::vector<CandidateFactor<Real>>& pool, const RationalPolynomial& f_rem,
                          const Integer& L, std::optional<std::chrono::steady_clock::time_point> deadline,
                          std::size_t cap) {
  RecombineResult out;
  out.remaining = f_rem;
  std::vector<std::size_t> alive(pool.size());
  std::iota(alive.begin(), alive.end(), 0);
  if (pool.size() > cap) {
    out.leftover = alive;
    out.trace.push_back("recombine: pool of " + std::to_string(pool.size()) + " exceeds cap");
    return out;
  }
  const ErrorBudget budget = compute_budget(L < 2 ? Integer(2) : L);

  for (std::size_t k = 2; k <= alive.size() && !out.remaining.is_constant(); ++k) {
    bool found = true;
    while (found && k <= alive.size()) {
      found = false;
      std::vector<std::size_t> pick(k);
      std::iota(pick.begin(), pick.end(), 0);
      while (true) {
        if (deadline && std::chrono::steady_clock::now() > *deadline) throw Timeout();
        ApproxPolynomial<Real> prod = pool[alive[pick[0]]].poly;
        for (std::size_t j = 1; j < k; ++j) prod = prod * pool[alive[pick[j]]].poly;

        if (prod.total_degree() <= out.remaining.total_degree() &&
            !(prod.max_imag() > ApproxPolynomial<Real>::noise_level() * std::max(Real(1), prod.max_abs()))) {
          CandidateFactor<Real> cand;
          cand.poly = make_monic(prod.real_part());
          cand.status = CandidateStatus::real;
          const auto div = approx_divide<Real>(out.remaining, cand);
          if (div.r <= accept_tolerance<Real>(out.remaining, budget)) {
            const auto vo = rationalize_verify<Real>(out.remaining, cand, div.h, L);
            if (vo.kind == VerifyOutcome::Kind::exact) {
              out.rational.push_back(vo.g);
              out.remaining = vo.h;
              out.trace.push_back("recombine: k=" + std::to_string(k) + " gave a rational factor of degree " +
                                  std::to_string(vo.g.total_degree()));
              std::vector<std::size_t> rest;
              for (std::size_t j = 0, q = 0; j < alive.size(); ++j) {
                if (q < k && pick[q] == j) {
                  ++q;
                } else {
                  rest.push_back(alive[j]);
                }
              }
              alive = std::move(rest);
              found = true;
              break;
            }
          }
        }

        // Next k-combination of positions in `alive`.
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == alive.size() - k + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
  }
  out.leftover = alive;
  return out;
}

namespace detail {

/// One pass of the factorization pipeline at a fixed working precision.
template <class Real>
class Stage {
 public:
  Stage(const RationalPolynomial& p, const Integer& L, const FactorConfig& config, std::mt19937_64& rng,
        bool final_tier)
      : config_(config), rng_(rng), L_(L), final_(final_tier), budget_(compute_budget(L < 2 ? Integer(2) : L)) {
    out_.remaining = p;
  }

  StageResult run() {
    try {
      loop();
    } catch (const NumericalFailure& e) {
      out_.complete = false;
      out_.trace.push_back(std::string("numerical failure at ") + std::to_string(precision_bits<Real>()) +
                           " bits: " + e.what());
    }
    return std::move(out_);
  }

 private:
  enum class SeedResult { exact, pooled, irreducible, unresolved, skipped };

  RationalPolynomial& cur() { return out_.remaining; }
  const RationalPolynomial& cur() const { return out_.remaining; }

  void note(const std::string& s) { out_.trace.push_back(s); }

  void emit(const RationalPolynomial& g, double residual) {
    out_.factors.push_back(g);
    out_.residuals.push_back(residual);
  }

  void loop() {
    const std::size_t guard_cap = 4 * cur().nvars() + 8;
    std::size_t rounds = 0;
    while (!cur().is_constant()) {
      check_deadline(config_);
      if (cur().total_degree() == 1) {
        emit(cur(), 0.0);
        cur() = RationalPolynomial::constant(cur().nvars(), 1);
        break;
      }
      if (++rounds > guard_cap) {
        note("no progress on the remaining polynomial");
        return;
      }
      if (!round()) return;
    }
    out_.complete = true;
  }

  /// One sweep over the branches of the current solve variable. Returns false
  /// when the stage has to stop incomplete.
  bool round() {
    const std::size_t s = default_solve_variable(cur());
    InitialPointOptions opts;
    opts.solve_var = s;
    opts.require_gradient = false;
    const auto seeds = initial_points<Real>(cur(), rng_, budget_, opts);
    pool_.clear();
    shared_.reset();

    for (const auto& seed : seeds) {
      check_deadline(config_);
      if (cur().is_constant() || !cur().depends_on(s)) break;
      if (!on_variety(cur(), seed)) continue;
      bool covered = false;
      for (const auto& member : pool_) {
        if (relative_value<Real>(member.poly, seed.coords) <= fit_tolerance<Real>()) covered = true;
      }
      if (covered) continue;

      switch (process_seed(seed, seeds, s)) {
        case SeedResult::unresolved:
          note("no factor found within the degree limit");
          return false;
        case SeedResult::irreducible:
          if (!pool_.empty()) {
            note("branch exhausted the degree search while real factors are pending");
            return false;
          }
          emit(cur(), 0.0);
          note("remaining polynomial of degree " + std::to_string(cur().total_degree()) + " is irreducible");
          cur() = RationalPolynomial::constant(cur().nvars(), 1);
          return true;
        default:
          break;
      }
    }

    if (!pool_.empty()) {
      const auto rc = recombine<Real>(pool_, cur(), L_, config_.deadline);
      for (const auto& t : rc.trace) note(t);
      for (const auto& g : rc.rational) emit(g, 0.0);
      cur() = rc.remaining;
      if (!rc.leftover.empty()) {
        note(std::to_string(rc.leftover.size()) + " real factors left after recombination");
        return false;
      }
    }
    return true;
  }

  bool on_variety(const RationalPolynomial& p, const SamplePoint<Real>& x) const {
    return relative_value<Real>(p, x.coords) <= ApproxPolynomial<Real>::noise_level();
  }

  unsigned degree_limit() const {
    unsigned lim = cur().total_degree() - 1;
    if (config_.max_factor_degree) lim = std::min(lim, *config_.max_factor_degree);
    return lim;
  }

  std::size_t active_axes(std::size_t s) const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < cur().nvars(); ++i) {
      if (i != s && cur().depends_on(i)) ++k;
    }
    return k;
  }

  SeedResult process_seed(const SamplePoint<Real>& seed, const std::vector<SamplePoint<Real>>& seeds,
                          std::size_t s) {
    const unsigned limit = degree_limit();

    // Samples filed for this branch while another branch was sampled.
    if (shared_ && shared_->siblings.count(seed.variety_tag)) {
      SampleSet<Real> view = branch_view(*shared_, seed.variety_tag);
      std::erase_if(view.points, [&](const SamplePoint<Real>& x) { return !on_variety(cur(), x); });
      for (unsigned m_deg = 1; m_deg <= limit; ++m_deg) {
        const auto ms = candidate_monomials(m_deg, cur().degree_profile());
        if (view.points.size() < points_needed(ms.size(), active_axes(s))) break;
        CandidateFactor<Real> c;
        try {
          c = extract_candidate<Real>(cur(), view, m_deg, budget_);
        } catch (const DegenerateSampling&) {
          break;
        }
        auto r = try_candidate(std::move(c), m_deg, "sibling");
        if (r) return *r;
      }
    }

    auto source = dedicated(seed, seeds, s);
    for (unsigned m_deg = 1; m_deg <= limit; ++m_deg) {
      check_deadline(config_);
      auto c = candidate_from(source, m_deg, s);
      auto r = try_candidate(std::move(c), m_deg, "branch");
      if (r) return *r;
    }
    if (config_.max_factor_degree && limit < cur().total_degree() - 1) return SeedResult::unresolved;
    return SeedResult::irreducible;
  }

  struct Source {
    NeighborhoodBox<Real> box;
    std::vector<SamplePoint<Real>> seeds;
    SampleSet<Real> samples;
    bool sampled = false;
  };

  Source dedicated(const SamplePoint<Real>& seed, const std::vector<SamplePoint<Real>>& seeds, std::size_t s) {
    const Real rel = ApproxPolynomial<Real>::noise_level();
    NeighborhoodOptions nopts;
    nopts.solve_var = s;
    std::vector<std::size_t> tracked;
    for (std::size_t i = 0; i < cur().nvars(); ++i) {
      if (i != s && cur().depends_on(i) && partial_nonzero<Real>(cur(), i, seed.coords, rel)) tracked.push_back(i);
    }
    nopts.tracked = tracked;
    Source src;
    src.box = neighborhood<Real>(cur(), seed, rng_, nopts);
    src.seeds = seeds;

    // Keep the first-order drift of the branch well below the distance to
    // the nearest other root at the center.
    Real gap(-1);
    for (const auto& other : seeds) {
      if (other.variety_tag == seed.variety_tag) continue;
      const Real d = abs(other.coords[s] - seed.coords[s]);
      if (gap < 0 || d < gap) gap = d;
    }
    if (gap > 0) {
      const auto ps = evaluate<Real>(partial_derivative(cur(), s), seed.coords);
      if (abs(ps) > 0) {
        Real drift(0);
        for (std::size_t i = 0; i < cur().nvars(); ++i) {
          if (i == s || !cur().depends_on(i)) continue;
          drift += abs(evaluate<Real>(partial_derivative(cur(), i), seed.coords) / ps) * src.box.half_widths[i];
        }
        if (drift > gap / 8) {
          const Real scale = gap / (8 * drift);
          for (auto& h : src.box.half_widths) h *= scale;
        }
      }
    }
    return src;
  }

  CandidateFactor<Real> candidate_from(Source& src, unsigned m_deg, std::size_t s) {
    const DegreeProfile dp = cur().degree_profile();
    const auto ms = candidate_monomials(m_deg, dp);
    const std::size_t need = points_needed(ms.size(), active_axes(s));
    std::vector<unsigned> counts = grid_counts_for(dp, s, m_deg, need);

    constexpr int kRefinements = 3;
    constexpr int kShrinks = 8;
    for (int refine = 0;; ++refine) {
      if (!src.sampled || !covers(src.samples.counts, counts)) {
        for (int shrink = 0;; ++shrink) {
          try {
            src.samples = sample_variety<Real>(cur(), src.box, dp, budget_, src.seeds, counts);
            break;
          } catch (const BranchAmbiguity&) {
            if (shrink == kShrinks) throw;
            for (auto& h : src.box.half_widths) h /= 2;
          }
        }
        src.sampled = true;
        if (!shared_) shared_ = src.samples;
      }
      try {
        return extract_candidate<Real>(cur(), src.samples, m_deg, budget_);
      } catch (const DegenerateSampling&) {
        if (refine == kRefinements) throw;
        for (std::size_t i = 0; i < counts.size(); ++i) {
          if (counts[i] > 1) counts[i] = 2 * counts[i] - 1;
        }
      }
    }
  }

  static bool covers(const std::vector<unsigned>& have, const std::vector<unsigned>& want) {
    if (have.size() != want.size()) return false;
    for (std::size_t i = 0; i < have.size(); ++i) {
      if (std::max(have[i], 1u) < std::max(want[i], 1u)) return false;
    }
    return true;
  }

  std::optional<SeedResult> try_candidate(CandidateFactor<Real> c, unsigned m_deg, const char* origin) {
    if (c.fit_error > fit_tolerance<Real>()) return std::nullopt;
    std::ostringstream tag;
    tag << origin << " " << *c.branch_tags.begin() << ", degree " << m_deg << ": ";

    CandidateFactor<Real> real = c;
    if (c.status == CandidateStatus::complex) {
      real = pair_conjugate<Real>(c, budget_);
      tag << "conjugate pair, ";
    }
    if (real.poly.total_degree() > cur().total_degree()) return std::nullopt;
    const auto div = approx_divide<Real>(cur(), real);
    if (div.r > accept_tolerance<Real>(cur(), budget_)) return std::nullopt;

    const auto vo = rationalize_verify<Real>(cur(), real, div.h, L_);
    if (vo.kind == VerifyOutcome::Kind::exact) {
      emit(vo.g, static_cast<double>(div.r));
      cur() = vo.h;
      note(tag.str() + "exact factor of degree " + std::to_string(vo.g.total_degree()));
      return SeedResult::exact;
    }
    if (c.point_residual > c.control_eps && !final_) {
      throw PrecisionShortfall(c.required_bits);
    }
    if (c.status == CandidateStatus::complex) {
      CandidateFactor<Real> conj = c;
      conj.poly = c.poly.conj();
      for (auto& p : conj.points) p = p.conj();
      pool_.push_back(std::move(c));
      pool_.push_back(std::move(conj));
    } else {
      pool_.push_back(std::move(c));
    }
    note(tag.str() + "real factor pooled");
    return SeedResult::pooled;
  }

  const FactorConfig& config_;
  std::mt19937_64& rng_;
  Integer L_;
  bool final_;
  ErrorBudget budget_;
  StageResult out_;
  std::vector<CandidateFactor<Real>> pool_;
  std::optional<SampleSet<Real>> shared_;
};

template <class Real>
StageResult run_stage(const RationalPolynomial& p, const Integer& L, const FactorConfig& config,
                      std::mt19937_64& rng, bool final_tier) {
  return Stage<Real>(p, L, config, rng, final_tier).run();
}

}  // namespace detail

}  // namespace varfactor

#define VARFACTOR_INSTANTIATE_ENGINE(Real)                                                            \
  template varfactor::CandidateFactor<Real> varfactor::extract_candidate<Real>(                       \
      const varfactor::RationalPolynomial&, const varfactor::SampleSet<Real>&, unsigned,              \
      const varfactor::ErrorBudget&);                                                                 \
  template varfactor::CandidateFactor<Real> varfactor::pair_conjugate<Real>(                          \
      const varfactor::CandidateFactor<Real>&, const varfactor::ErrorBudget&);                        \
  template varfactor::DivisionResult<Real> varfactor::approx_divide<Real>(                            \
      const varfactor::RationalPolynomial&, const varfactor::CandidateFactor<Real>&);                 \
  template Real varfactor::accept_tolerance<Real>(const varfactor::RationalPolynomial&,               \
                                                  const varfactor::ErrorBudget&);                     \
  template varfactor::VerifyOutcome varfactor::rationalize_verify<Real>(                              \
      const varfactor::RationalPolynomial&, const varfactor::CandidateFactor<Real>&,                  \
      const varfactor::ApproxPolynomial<Real>&, const varfactor::Integer&);                           \
  template varfactor::RecombineResult varfactor::recombine<Real>(                                     \
      const std::vector<varfactor::CandidateFactor<Real>>&, const varfactor::RationalPolynomial&,     \
      const varfactor::Integer&, std::optional<std::chrono::steady_clock::time_point>, std::size_t);  \
  template varfactor::detail::StageResult varfactor::detail::run_stage<Real>(                         \
      const varfactor::RationalPolynomial&, const varfactor::Integer&, const varfactor::FactorConfig&, \
      std::mt19937_64&, bool);
