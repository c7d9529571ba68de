#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "varfactor/approx_polynomial.hpp"
#include "varfactor/interpolation.hpp"
#include "varfactor/rational_polynomial.hpp"
#include "varfactor/rational_recovery.hpp"
#include "varfactor/sampler.hpp"

namespace varfactor {

enum class CandidateStatus { complex, real, rational_verified };

const char* to_string(CandidateStatus s);

/// Monic approximate factor reconstructed on one or more root branches.
template <class Real>
struct CandidateFactor {
  ApproxPolynomial<Real> poly;
  std::set<int> branch_tags;
  CandidateStatus status = CandidateStatus::complex;
  Real residual{0};  ///< ||f - g h|| once divided; 0 before
  /// Largest relative value |g(P)| / scale over samples not used for the
  /// reconstruction (0 when every sample was used).
  Real fit_error{0};
  /// The m - 1 points the reconstruction went through.
  std::vector<SamplePoint<Real>> points;
  /// Working precision the interpolation error bound asks for.
  int required_bits = 0;
  /// Largest |f| over `points`, compared against the control error.
  Real point_residual{0};
  Real control_eps{0};
};

template <class Real>
struct DivisionResult {
  ApproxPolynomial<Real> h;
  Real r{0};
};

struct VerifyOutcome {
  enum class Kind { exact, real_only, reject };
  Kind kind = Kind::reject;
  RationalPolynomial g;
  RationalPolynomial h;
};

struct RecombineResult {
  std::vector<RationalPolynomial> rational;
  std::vector<std::size_t> leftover;  ///< pool indices not used
  RationalPolynomial remaining;       ///< f_rem with the rational factors divided out
  std::vector<std::string> trace;
};

/// Smallest total-degree-m_deg monomial set the samples must support, with
/// per-variable caps from `caps`.
MonomialSet candidate_monomials(unsigned m_deg, const DegreeProfile& caps);

/// Grid node counts per variable so that every active axis carries at least
/// m_deg + 1 nodes and the grid holds at least `min_points` points.
std::vector<unsigned> grid_counts_for(const DegreeProfile& dp, std::size_t solve_var, unsigned m_deg,
                                      std::size_t min_points);

/// Points needed to reconstruct over `m` monomials with held-out checks.
std::size_t points_needed(std::size_t m, std::size_t active_axes);

/// Reconstructs the lowest-degree candidate through the branch samples of
/// `ss` using all monomials of total degree <= m_deg. Throws
/// DegenerateSampling when there are too few points or the selected rows are
/// not proper interpolation points.
template <class Real>
CandidateFactor<Real> extract_candidate(const RationalPolynomial& f, const SampleSet<Real>& ss, unsigned m_deg,
                                        const ErrorBudget& budget);

/// Reconstructs the conjugate candidate from the conjugated support points and
/// returns the monic real product g * conj(g).
template <class Real>
CandidateFactor<Real> pair_conjugate(const CandidateFactor<Real>& g, const ErrorBudget& budget);

/// Least-squares h minimizing ||f - g h||_2 over monomials of degree at most
/// deg f - deg g (per-variable caps included).
template <class Real>
DivisionResult<Real> approx_divide(const RationalPolynomial& f, const CandidateFactor<Real>& g);

/// max(2^24 u ||f||, beta ||f|| sqrt(#terms)).
template <class Real>
Real accept_tolerance(const RationalPolynomial& f, const ErrorBudget& budget);

/// Rounds g and h to rationals with denominators <= L and checks f == g' h'
/// exactly.
template <class Real>
VerifyOutcome rationalize_verify(const RationalPolynomial& f, const CandidateFactor<Real>& g,
                                 const ApproxPolynomial<Real>& h, const Integer& L);

/// Subset products of the pool (k = 2, 3, ...) tested for rationality against
/// the exact remaining polynomial. Pools larger than `cap` are not searched.
template <class Real>
RecombineResult recombine(const std::vector<CandidateFactor<Real>>& pool, const RationalPolynomial& f_rem,
                          const Integer& L, std::optional<std::chrono::steady_clock::time_point> deadline = {},
                          std::size_t cap = 24);

struct FactorConfig {
  std::uint64_t seed = 0xC0FFEE;
  std::optional<int> precision_bits;
  std::optional<Integer> denominator_bound;
  std::optional<unsigned> max_factor_degree;
  bool assume_squarefree = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  int max_escalations = 2;
};

struct FactorDiagnostics {
  int precision_bits = 0;
  Integer L;
  std::vector<double> residuals;  ///< one per emitted factor
  std::vector<std::string> trace;
  std::uint64_t seed = 0;
};

struct FactorizationResult {
  Rational unit;
  std::vector<RationalPolynomial> factors;  ///< monic, sorted by canonical_less
  /// False when some factor could not be certified; the product identity
  /// still holds, with the uncertified remainder listed as a factor.
  bool complete = false;
  FactorDiagnostics diagnostics;
};

/// Starting precision: the tier covering the control error for a
/// ten-monomial reconstruction at bound L, and at least 256 bits.
int default_precision(const Integer& L);

FactorizationResult factorize(const RationalPolynomial& f, const FactorConfig& config = {});

namespace detail {

struct StageResult {
  std::vector<RationalPolynomial> factors;
  std::vector<double> residuals;
  RationalPolynomial remaining;
  bool complete = false;
  std::vector<std::string> trace;
};

template <class Real>
StageResult run_stage(const RationalPolynomial& p, const Integer& L, const FactorConfig& config,
                      std::mt19937_64& rng, bool final_tier);

}  // namespace detail

}  // namespace varfactor
