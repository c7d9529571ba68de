#include "varfactor/bench.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "varfactor/errors.hpp"

namespace varfactor {

namespace {

Monomial random_monomial(std::size_t nvars, unsigned degree, std::mt19937_64& rng) {
  Monomial m(nvars);
  std::uniform_int_distribution<std::size_t> pick(0, nvars - 1);
  for (unsigned k = 0; k < degree; ++k) ++m.exponents[pick(rng)];
  return m;
}

Rational random_coefficient(long denom_max, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, std::max(1L, denom_max));
  long p = 0;
  while (p == 0) p = num(rng);
  Rational q(p, den(rng));
  q.canonicalize();
  return q;
}

}  // namespace

RationalPolynomial random_monic_factor(std::size_t nvars, unsigned max_degree, long denom_max,
                                       std::mt19937_64& rng) {
  if (nvars == 0 || max_degree == 0) throw std::invalid_argument("factor needs a variable and a positive degree");
  std::uniform_int_distribution<unsigned> degree(1, max_degree);
  std::uniform_int_distribution<int> extra(1, 3);
  while (true) {
    const unsigned t = degree(rng);
    const Monomial lead = random_monomial(nvars, t, rng);
    RationalPolynomial p(nvars);
    p.add_term(lead, Rational(1));
    const int n_extra = extra(rng);
    std::uniform_int_distribution<unsigned> lower(0, t);
    for (int k = 0; k < n_extra; ++k) {
      const Monomial m = random_monomial(nvars, lower(rng), rng);
      if (!grlex_less(m, lead)) continue;
      p.add_term(m, random_coefficient(denom_max, rng));
    }
    if (p.size() >= 2) return p;
  }
}

RationalPolynomial bench_instance(const BenchSpec& spec, std::uint64_t seed, std::size_t index,
                                  std::vector<RationalPolynomial>* factors) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  while (true) {
    std::vector<RationalPolynomial> fs;
    while (fs.size() < spec.nfactors) {
      auto f = random_monic_factor(spec.nvars, spec.factor_degree, spec.denom_max, rng);
      if (std::find(fs.begin(), fs.end(), f) == fs.end()) fs.push_back(std::move(f));
    }
    RationalPolynomial product = exact_product(fs);
    if (product.is_constant() || !squarefree_probe(product, rng)) continue;
    if (factors) *factors = std::move(fs);
    return product;
  }
}

std::vector<std::string> default_variable_names(std::size_t nvars) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= nvars; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

BenchReport run_bench(const BenchSpec& spec, const FactorConfig& base, unsigned workers,
                      std::chrono::seconds timeout) {
  BenchReport report;
  report.trials.resize(spec.trials);
  if (spec.trials == 0) return report;
  const auto names = default_variable_names(spec.nvars);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < spec.trials; i = next++) {
      BenchTrial& trial = report.trials[i];
      trial.index = i;
      const RationalPolynomial f = bench_instance(spec, base.seed, i);
      trial.input = to_string(f, names);
      FactorConfig config = base;
      config.seed = base.seed + i;
      const auto start = std::chrono::steady_clock::now();
      config.deadline = start + timeout;
      try {
        const auto result = factorize(f, config);
        trial.factors_found = result.factors.size();
        trial.exact = exact_product(result.factors) * result.unit == f;
        trial.success = result.complete && trial.exact;
      } catch (const std::exception& e) {
        trial.error = e.what();
      }
      trial.time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(spec.trials)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<double> times;
  std::size_t ok = 0;
  for (const auto& t : report.trials) {
    ok += t.success;
    times.push_back(t.time_ms);
  }
  std::sort(times.begin(), times.end());
  report.success_rate = static_cast<double>(ok) / static_cast<double>(spec.trials);
  const std::size_t mid = times.size() / 2;
  report.median_ms = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  return report;
}

}  // namespace varfactor
