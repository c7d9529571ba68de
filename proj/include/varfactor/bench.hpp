#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "varfactor/engine.hpp"
#include "varfactor/rational_polynomial.hpp"

namespace varfactor {

struct BenchSpec {
  std::size_t nvars = 3;
  std::size_t nfactors = 4;
  unsigned factor_degree = 2;
  long denom_max = 8;
  std::size_t trials = 20;
};

struct BenchTrial {
  std::size_t index = 0;
  std::string input;
  bool success = false;  ///< complete factorization
  bool exact = false;    ///< unit * product of factors == input
  double time_ms = 0;
  std::size_t factors_found = 0;
  std::string error;
};

struct BenchReport {
  std::vector<BenchTrial> trials;
  double success_rate = 0;
  double median_ms = 0;
};

/// Monic factor (graded-lex leading coefficient 1) of total degree between 1
/// and `max_degree` with at least two terms. Numerators lie in [-9, 9],
/// denominators in [1, denom_max].
RationalPolynomial random_monic_factor(std::size_t nvars, unsigned max_degree, long denom_max,
                                       std::mt19937_64& rng);

/// Square-free product of spec.nfactors distinct random factors, drawn from
/// the stream for (seed, index).
RationalPolynomial bench_instance(const BenchSpec& spec, std::uint64_t seed, std::size_t index,
                                  std::vector<RationalPolynomial>* factors = nullptr);

std::vector<std::string> default_variable_names(std::size_t nvars);

/// Runs every trial with its own deadline; `workers` threads share the trials.
BenchReport run_bench(const BenchSpec& spec, const FactorConfig& base, unsigned workers = 1,
                      std::chrono::seconds timeout = std::chrono::seconds(300));

}  // namespace varfactor
