// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <Eigen/LU>
#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "varfactor/bench.hpp"
#include "varfactor/engine.hpp"
#include "varfactor/interpolation.hpp"
#include "varfactor/rational_recovery.hpp"
#include "varfactor/sampler.hpp"

#ifndef VARFACTOR_CLI
#error "VARFACTOR_CLI must name the command-line binary"
#endif

using namespace varfactor;

namespace {

using R = Float256;
using C = Complex<R>;

struct Verdict {
  bool pass = false;
  std::string detail;
};

bool has_trace(const FactorizationResult& r, const std::string& needle) {
  return std::any_of(r.diagnostics.trace.begin(), r.diagnostics.trace.end(),
                     [&](const std::string& t) { return t.find(needle) != std::string::npos; });
}

Verdict exhaustive_recovery() {
  std::size_t cases = 0, failures = 0;
  for (long L = 2; L <= 30; ++L) {
    const Rational beta = compute_budget(L).beta;
    const std::array<Rational, 3> shifts{Rational(0), beta / 2, -beta / 2};
    for (long q = 1; q <= L; ++q) {
      for (long p = 0; p <= 5 * L; ++p) {
        Rational x(p, q);
        x.canonicalize();
        if (x.get_den() != q) continue;
        for (const auto& d : shifts) {
          ++cases;
          try {
            if (recover_rational(to_real<R>(Rational(x + d)), L) != x) ++failures;
          } catch (const std::exception&) {
            ++failures;
          }
        }
      }
    }
  }
  return {failures == 0, std::to_string(cases) + " cases, " + std::to_string(failures) + " failures"};
}

RationalPolynomial random_sparse(std::mt19937_64& rng, std::size_t nvars) {
  std::uniform_int_distribution<int> nterms(2, 8), deg(0, 4), num(-9, 9), den(1, 9);
  std::uniform_int_distribution<std::size_t> var(0, nvars - 1);
  while (true) {
    RationalPolynomial f(nvars);
    const int t = nterms(rng);
    for (int k = 0; k < t; ++k) {
      Monomial m(nvars);
      const int d = deg(rng);
      for (int j = 0; j < d; ++j) ++m.exponents[var(rng)];
      int a = 0;
      while (a == 0) a = num(rng);
      Rational c(a, den(rng));
      c.canonicalize();
      f.add_term(m, c);
    }
    if (f.size() >= 2 && !f.is_constant()) return f;
  }
}

Verdict reconstruction_fidelity() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> nv(1, 3);
  std::uniform_real_distribution<double> coord(-2, 2);
  const R eps = ldexp(unit_roundoff<R>(), 32);
  int passed = 0, total = 200;
  R worst(0);
  for (int trial = 0; trial < total; ++trial) {
    const std::size_t n = nv(rng);
    const RationalPolynomial f = random_sparse(rng, n);
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < n; ++i) {
      if (f.depends_on(i)) vars.push_back(i);
    }
    MonomialSet ms;
    for (const auto& [m, c] : f.terms()) ms.monomials.push_back(m);
    std::sort(ms.monomials.begin(), ms.monomials.end(), GrlexLess{});

    bool ok = false;
    for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
      std::vector<SamplePoint<R>> pts;
      while (pts.size() + 1 < ms.size()) {
        const std::size_t s = vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
        std::vector<C> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = C(R(coord(rng)), R(coord(rng)));
        // Coefficients of f in x_s at the drawn coordinates.
        std::vector<C> coeffs(f.degree_in(s) + 1);
        for (const auto& [m, c] : f.terms()) {
          C v(to_real<R>(c));
          for (std::size_t i = 0; i < n; ++i) {
            if (i != s) v *= pow(x[i], static_cast<int>(m.exponents[i]));
          }
          coeffs[m.exponents[s]] += v;
        }
        while (coeffs.size() > 1 && coeffs.back() == C()) coeffs.pop_back();
        if (coeffs.size() < 2) continue;
        auto roots = univariate_roots<R>(coeffs, eps);
        // Points must be distinct and carry a nonzero row; a univariate f has
        // only finitely many.
        std::erase_if(roots, [&](const C& z) {
          auto y = x;
          y[s] = z;
          SamplePoint<R> cand;
          cand.coords = y;
          if (evaluation_rows<R>({cand}, ms).norm() == 0) return true;  // no information in this point
          return std::any_of(pts.begin(), pts.end(), [&](const SamplePoint<R>& q) { return q.coords == y; });
        });
        if (roots.empty()) break;
        x[s] = roots[std::uniform_int_distribution<std::size_t>(0, roots.size() - 1)(rng)];
        SamplePoint<R> p;
        p.coords = x;
        pts.push_back(p);
      }
      if (pts.size() + 1 != ms.size()) continue;
      const auto em = build_matrix<R>(pts, ms);
      if (!uniqueness_check(em).unique) continue;
      const auto g = make_monic(reconstruct(em));
      const RationalPolynomial truth = make_monic(f);
      R err(0), scale(0);
      for (const auto& [m, c] : truth.terms()) {
        err = std::max(err, R(abs(g.coefficient(m) - C(to_real<R>(c)))));
        scale = std::max(scale, R(abs(to_real<R>(c))));
      }
      err /= scale;
      worst = std::max(worst, err);
      ok = err <= R("1e-8");
    }
    passed += ok;
    if (!ok && std::getenv("ACCEPTANCE_VERBOSE")) {
      std::vector<std::string> names{"x1", "x2", "x3"};
      names.resize(n);
      std::fprintf(stderr, "  not reconstructed: %s\n", to_string(f, names).c_str());
    }
  }
  std::ostringstream os;
  os << passed << "/" << total << " within 1e-8, worst relative error " << worst.convert_to<double>();
  return {passed == total, os.str()};
}

Verdict bound_soundness() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5), small(-1, 1);
  std::uniform_int_distribution<unsigned> m2(2, 6), m3(3, 6);
  const auto monomials = monomial_candidates(3, 2);
  auto eval_matrix = [&](unsigned m) {
    CMatrix<R> a(m, m);
    for (unsigned i = 0; i < m; ++i) {
      const C x(R(u(rng)), R(u(rng))), y(R(u(rng)), R(u(rng)));
      for (unsigned j = 0; j < m; ++j) {
        const auto& e = monomials.monomials[j].exponents;
        a(i, j) = pow(x, static_cast<int>(e[0])) * pow(y, static_cast<int>(e[1]));
      }
    }
    return a;
  };
  int v3 = 0, v4 = 0, v5 = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const unsigned m = m2(rng);
    const auto a = eval_matrix(m);
    const auto st = monomial_stats<R>(a);
    if (abs(a.determinant()) > vandermonde_bound(m, st.M, st.B)) ++v3;
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const unsigned m = m3(rng);
    auto a = eval_matrix(m);
    const R eps_col = ldexp(R(1), -static_cast<int>(rng() % 40));
    const auto col = static_cast<Eigen::Index>(rng() % m);
    for (unsigned i = 0; i < m; ++i) a(i, col) = C(R(small(rng)), R(small(rng))) * eps_col / sqrt(R(2));
    const auto st = monomial_stats<R>(a);
    if (abs(a.determinant()) > perturbed_bound(m, st.M, st.B, eps_col)) ++v4;
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const unsigned m = m3(rng);
    const auto a = eval_matrix(m);
    const R eps = ldexp(R(1), -static_cast<int>(rng() % 40));
    CMatrix<R> b = a;
    for (unsigned i = 0; i < m; ++i) {
      for (unsigned j = 0; j < m; ++j) b(i, j) += C(R(small(rng)), R(small(rng))) * eps / sqrt(R(2));
    }
    const auto sa = monomial_stats<R>(a), sb = monomial_stats<R>(b);
    const R M = std::max(sa.M, sb.M), B = std::max(sa.B, sb.B);
    if (abs(a.determinant() - b.determinant()) > difference_bound(m, M, B, eps)) ++v5;
  }
  std::ostringstream os;
  os << "violations: determinant " << v3 << ", replaced column " << v4 << ", perturbed pair " << v5
     << " (1000 each)";
  return {v3 + v4 + v5 == 0, os.str()};
}

Verdict desk_bench() {
  BenchSpec spec;  // 3 vars, 4 factors, degree <= 2, denominators <= 8, 20 trials
  const auto report = run_bench(spec, FactorConfig{}, 1, std::chrono::seconds(60));
  double slowest = 0;
  bool all_exact = true;
  for (const auto& t : report.trials) {
    slowest = std::max(slowest, t.time_ms);
    if (t.success && !t.exact) all_exact = false;
  }
  std::ostringstream os;
  os << "success " << report.success_rate * 100 << "%, median " << report.median_ms << " ms, slowest "
     << slowest << " ms";
  return {report.success_rate >= 0.95 && slowest < 60000 && all_exact, os.str()};
}

Verdict conjugate_pairing() {
  const std::vector<std::string> v{"x1", "x2"};
  const auto q = parse_poly("x1^2 + x2^2", v);
  const auto a = factorize(q);
  const auto b = factorize(q * parse_poly("x1 + x2 - 1", v));
  const bool ok_a = a.complete && a.factors == std::vector{q} && has_trace(a, "conjugate pair");
  const bool ok_b = b.complete && b.factors.size() == 2 &&
                    std::find(b.factors.begin(), b.factors.end(), q) != b.factors.end() &&
                    has_trace(b, "conjugate pair");
  return {ok_a && ok_b, std::string("x1^2+x2^2 ") + (ok_a ? "ok" : "wrong") + ", product " + (ok_b ? "ok" : "wrong")};
}

Verdict recombination() {
  const std::vector<std::string> v{"x"};
  FactorConfig forced;
  forced.denominator_bound = Integer(1);
  const auto a = factorize(parse_poly("x^4 - 5*x^2 + 6", v), forced);
  std::vector<RationalPolynomial> want{parse_poly("x^2 - 3", v), parse_poly("x^2 - 2", v)};
  std::sort(want.begin(), want.end(), canonical_less);
  const bool ok_a = a.complete && a.factors == want && has_trace(a, "k=2");
  const auto cube = parse_poly("x^3 - 2", v);
  const auto b = factorize(cube);
  const bool ok_b = b.complete && b.factors == std::vector{cube} && has_trace(b, "k=3");
  return {ok_a && ok_b, std::string("pair products ") + (ok_a ? "ok" : "wrong") + ", triple product " +
                            (ok_b ? "ok" : "wrong")};
}

Verdict denominator_bound() {
  std::mt19937_64 rng(6);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RationalPolynomial> fs;
    const int k = 2 + trial % 3;
    for (int j = 0; j < k; ++j) fs.push_back(random_monic_factor(3, 3, 12, rng));
    const Integer n = lcm_denominators(exact_product(fs));
    for (const auto& f : fs) {
      if (n % lcm_denominators(f) != 0) ++violations;
    }
  }
  return {violations == 0, "100 products, " + std::to_string(violations) + " violations"};
}

std::string capture(const std::string& cmd, int& code) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    code = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  code = pclose(pipe);
  return out;
}

Verdict determinism() {
  const std::vector<std::pair<std::string, std::string>> inputs{
      {"x1,x2,x3", "x1^2*x2 - 1/3*x1*x3 + 2*x2^2*x3 - 2/3*x3^2 + x1 - 1/2"},
      {"x,y", "x^2 + y^2"},
      {"x", "x^4 - 5*x^2 + 6"}};
  int identical = 0;
  for (const auto& [vars, text] : inputs) {
    const std::string cmd = "printf '%s' '" + text + "' | '" + std::string(VARFACTOR_CLI) + "' factor --vars " +
                            vars + " --seed 7 --format json -";
    int c1 = 0, c2 = 0;
    const auto a = capture(cmd, c1), b = capture(cmd, c2);
    if (c1 == 0 && c2 == 0 && !a.empty() && a == b) ++identical;
  }
  return {identical == static_cast<int>(inputs.size()),
          std::to_string(identical) + "/" + std::to_string(inputs.size()) + " inputs byte-identical across runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"exhaustive rational recovery", exhaustive_recovery},
      {"reconstruction through exact variety points", reconstruction_fidelity},
      {"determinant bound soundness", bound_soundness},
      {"desk-scale factorization bench", desk_bench},
      {"conjugate pairing", conjugate_pairing},
      {"recombination of real factors", recombination},
      {"denominator bound of monic factors", denominator_bound},
      {"deterministic JSON output", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s (%s; %.2f s)\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
