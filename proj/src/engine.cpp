#include "varfactor/engine.hpp"

#include <algorithm>

#include "varfactor/errors.hpp"

namespace varfactor {

const char* to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::complex:
      return "complex";
    case CandidateStatus::real:
      return "real";
    case CandidateStatus::rational_verified:
      return "rational-verified";
  }
  return "?";
}

MonomialSet candidate_monomials(unsigned m_deg, const DegreeProfile& caps) {
  DegreeProfile c = caps;
  for (auto& d : c.per_variable) d = std::min<std::uint32_t>(d, m_deg);
  return monomial_candidates(m_deg, c);
}

std::size_t points_needed(std::size_t m, std::size_t active_axes) {
  if (m < 2) return 1;
  return active_axes == 0 ? m - 1 : 2 * (m - 1);
}

std::vector<unsigned> grid_counts_for(const DegreeProfile& dp, std::size_t solve_var, unsigned m_deg,
                                      std::size_t min_points) {
  std::vector<unsigned> counts(dp.nvars(), 1);
  bool any = false;
  for (std::size_t i = 0; i < dp.nvars(); ++i) {
    if (i == solve_var || dp.per_variable[i] == 0) continue;
    counts[i] = std::max(dp.per_variable[i], m_deg) + 1;
    any = true;
  }
  if (solve_var < counts.size()) counts[solve_var] = 0;
  if (!any) return counts;
  auto total = [&] {
    std::size_t t = 1;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i != solve_var) t *= counts[i];
    }
    return t;
  };
  while (total() < min_points) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i != solve_var && counts[i] > 1) counts[i] = 2 * counts[i] - 1;
    }
  }
  return counts;
}

int default_precision(const Integer& L) {
  const auto ce = control_error<Float256>(L < 2 ? Integer(2) : L, 10, Float256(4), Float256(4));
  return tier_for(std::clamp(ce.precision_bits, 256, kPrecisionTiers.back()));
}

namespace {

int next_tier(int bits) {
  for (int t : kPrecisionTiers) {
    if (t > bits) return t;
  }
  return bits;
}

}  // namespace

FactorizationResult factorize(const RationalPolynomial& f, const FactorConfig& config) {
  if (f.is_zero() || f.is_constant()) throw std::invalid_argument("factorize needs a nonconstant polynomial");
  if (config.precision_bits && *config.precision_bits < 64) throw std::invalid_argument("precision below 64 bits");

  FactorizationResult result;
  result.unit = f.leading_coefficient();
  const RationalPolynomial monic = make_monic(f);
  const Integer L = config.denominator_bound ? *config.denominator_bound : lcm_denominators(monic);
  if (L < 1) throw std::invalid_argument("denominator bound must be positive");

  std::mt19937_64 rng(config.seed);
  if (!config.assume_squarefree && !squarefree_probe(monic, rng)) throw NotSquareFree();

  int bits = config.precision_bits ? tier_for(*config.precision_bits) : default_precision(L);
  RationalPolynomial remaining = monic;
  auto& diag = result.diagnostics;
  diag.L = L;
  diag.seed = config.seed;

  for (int attempt = 0;; ++attempt) {
    const bool final_tier = attempt >= config.max_escalations || bits == kPrecisionTiers.back();
    diag.precision_bits = bits;
    auto stage = with_precision(bits, [&](auto tag) {
      using Real = typename decltype(tag)::type;
      return detail::run_stage<Real>(remaining, L, config, rng, final_tier);
    });
    for (auto& t : stage.trace) diag.trace.push_back(std::move(t));
    for (std::size_t i = 0; i < stage.factors.size(); ++i) {
      result.factors.push_back(std::move(stage.factors[i]));
      diag.residuals.push_back(stage.residuals[i]);
    }
    remaining = std::move(stage.remaining);
    if (stage.complete) {
      result.complete = true;
      break;
    }
    if (final_tier) {
      if (!remaining.is_constant()) {
        result.factors.push_back(remaining);
        diag.residuals.push_back(-1.0);
        diag.trace.push_back("unverified remainder of degree " + std::to_string(remaining.total_degree()));
      }
      break;
    }
    bits = next_tier(bits);
    diag.trace.push_back("raising precision to " + std::to_string(bits) + " bits");
  }

  // Sort factors and keep residuals aligned.
  std::vector<std::size_t> order(result.factors.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canonical_less(result.factors[a], result.factors[b]);
  });
  std::vector<RationalPolynomial> factors;
  std::vector<double> residuals;
  for (auto i : order) {
    factors.push_back(result.factors[i]);
    residuals.push_back(diag.residuals[i]);
  }
  result.factors = std::move(factors);
  diag.residuals = std::move(residuals);

  if (exact_product(result.factors) * result.unit != f) {
    throw std::logic_error("factor product does not reproduce the input");
  }
  return result;
}

}  // namespace varfactor
