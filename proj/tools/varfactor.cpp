// Command-line front end: factor, bench, recover.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "varfactor/bench.hpp"
#include "varfactor/engine.hpp"
#include "varfactor/errors.hpp"
#include "varfactor/rational_recovery.hpp"
#include "varfactor/report.hpp"

namespace {

enum Exit { kOk = 0, kInputError = 1, kIncomplete = 2, kTimeout = 3 };

std::vector<std::string> split_names(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto b = name.find_first_not_of(" \t");
    const auto e = name.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty variable name");
    out.push_back(name.substr(b, e - b + 1));
  }
  if (out.empty()) throw std::invalid_argument("no variables given");
  return out;
}

std::string read_input(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return text;
}

struct FactorArgs {
  std::string vars;
  std::uint64_t seed = 0xC0FFEE;
  int precision_bits = 0;
  std::string denominator_bound;
  unsigned max_factor_degree = 0;
  std::string format = "text";
  double timeout = 0;
  bool timing = false;
  bool assume_squarefree = false;
  std::string file = "-";
};

int run_factor(const FactorArgs& a) {
  using namespace varfactor;
  std::vector<std::string> vars;
  RationalPolynomial f;
  FactorConfig config;
  try {
    vars = split_names(a.vars);
    f = parse_poly(read_input(a.file), vars);
    config.seed = a.seed;
    if (a.precision_bits > 0) config.precision_bits = a.precision_bits;
    if (!a.denominator_bound.empty()) {
      Integer L(a.denominator_bound, 10);
      if (L < 1) throw std::invalid_argument("denominator bound must be positive");
      config.denominator_bound = L;
    }
    if (a.max_factor_degree > 0) config.max_factor_degree = a.max_factor_degree;
    config.assume_squarefree = a.assume_squarefree;
    if (f.is_constant()) throw std::invalid_argument("input is constant");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  if (a.timeout > 0) {
    config.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(a.timeout));
  }
  FactorizationResult result;
  try {
    result = factorize(f, config);
  } catch (const Timeout&) {
    std::cerr << "error: timed out\n";
    return kTimeout;
  } catch (const NotSquareFree& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  const long long ms =
      a.timing ? std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count()
               : 0;
  if (a.format == "json") {
    std::cout << to_json(result, f, vars, ms).dump() << '\n';
  } else {
    std::cout << to_text(result, f, vars, ms);
  }
  return result.complete ? kOk : kIncomplete;
}

int run_recover(const std::string& value, const std::string& bound) {
  using namespace varfactor;
  Rational r;
  Integer L;
  try {
    r = parse_decimal(value);
    L = Integer(bound, 10);
    if (L < 2) throw std::invalid_argument("bound must be at least 2");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  try {
    std::cout << to_string(recover_rational(to_real<Float256>(r), L)) << '\n';
  } catch (const BoundViolated& e) {
    std::cerr << "bound violated\n";
    return kIncomplete;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor multivariate polynomials over Q by variety sampling"};
  app.require_subcommand(1);

  FactorArgs fa;
  auto* factor = app.add_subcommand("factor", "Factor one polynomial");
  factor->add_option("--vars", fa.vars, "Comma-separated variable names, in order")->required();
  factor->add_option("--seed", fa.seed, "Random seed")->capture_default_str();
  factor->add_option("--precision-bits", fa.precision_bits, "Starting working precision")->check(CLI::PositiveNumber);
  factor->add_option("--denominator-bound", fa.denominator_bound, "Override the denominator bound L");
  factor->add_option("--max-factor-degree", fa.max_factor_degree, "Largest factor degree searched")
      ->check(CLI::PositiveNumber);
  factor->add_option("--format", fa.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  factor->add_option("--timeout", fa.timeout, "Seconds before giving up")->check(CLI::NonNegativeNumber);
  factor->add_flag("--timing", fa.timing, "Report wall time (otherwise time_ms is 0)");
  factor->add_flag("--assume-squarefree", fa.assume_squarefree, "Skip the square-freeness probe");
  factor->add_option("file", fa.file, "Input file, or - for stdin");

  varfactor::BenchSpec spec;
  unsigned workers = 1;
  std::string bench_format = "text";
  std::uint64_t bench_seed = 0xC0FFEE;
  double bench_timeout = 300;
  auto* bench = app.add_subcommand("bench", "Factor seeded random products");
  bench->add_option("--nvars", spec.nvars)->required()->check(CLI::PositiveNumber);
  bench->add_option("--nfactors", spec.nfactors)->required()->check(CLI::PositiveNumber);
  bench->add_option("--factor-degree", spec.factor_degree)->required()->check(CLI::PositiveNumber);
  bench->add_option("--denom-max", spec.denom_max)->required()->check(CLI::PositiveNumber);
  bench->add_option("--trials", spec.trials)->required()->check(CLI::NonNegativeNumber);
  bench->add_option("--workers", workers)->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_option("--timeout", bench_timeout, "Seconds per trial")->check(CLI::PositiveNumber);
  bench->add_option("--format", bench_format)->check(CLI::IsMember({"text", "json"}));

  std::string value, bound;
  auto* recover = app.add_subcommand("recover", "Recover p/q with q <= L from a decimal approximation");
  recover->add_option("--value", value)->required();
  recover->add_option("--bound", bound)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (*factor) return run_factor(fa);
  if (*recover) return run_recover(value, bound);

  varfactor::FactorConfig base;
  base.seed = bench_seed;
  const auto report = varfactor::run_bench(spec, base, workers,
                                           std::chrono::seconds(static_cast<long long>(bench_timeout)));
  if (bench_format == "json") {
    std::cout << varfactor::to_json(report).dump(2) << '\n';
  } else {
    std::cout << varfactor::to_text(report);
  }
  return kOk;
}
