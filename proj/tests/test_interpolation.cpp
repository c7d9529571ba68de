#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "varfactor/interpolation.hpp"

using namespace varfactor;

namespace {

using R = Float256;
using C = Complex<R>;

SamplePoint<R> pt(std::initializer_list<double> xs) {
  SamplePoint<R> p;
  for (double x : xs) p.coords.emplace_back(R(x));
  return p;
}

MonomialSet set_of(std::initializer_list<std::vector<std::uint32_t>> ms) {
  MonomialSet s;
  for (const auto& e : ms) s.monomials.emplace_back(e);
  return s;
}

unsigned long binomial(unsigned n, unsigned k) {
  unsigned long r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("monomial candidates") {
  const auto s = monomial_candidates(1, 2);
  REQUIRE(s.size() == 3);
  CHECK(s.monomials[0] == Monomial(2));
  CHECK(s.monomials[1] == Monomial({0, 1}));
  CHECK(s.monomials[2] == Monomial({1, 0}));
  CHECK(monomial_candidates(2, 2).size() == 6);
  const auto c = monomial_candidates(0, 3);
  REQUIRE(c.size() == 1);
  CHECK(c.monomials[0].is_one());
  for (unsigned d = 0; d <= 5; ++d) {
    for (unsigned n = 1; n <= 4; ++n) CHECK(monomial_candidates(d, n).size() == binomial(d + n, n));
  }
}

TEST_CASE("per-variable caps prune candidates") {
  DegreeProfile caps{{2, 0}, 2};
  const auto s = monomial_candidates(2, caps);
  CHECK(s.size() == 3);
  for (const auto& m : s.monomials) CHECK(m.exponents[1] == 0);
}

TEST_CASE("evaluation matrix") {
  auto em = build_matrix<R>({pt({1, 1})}, set_of({{1, 1}, {0, 0}}));
  CHECK(em.entries.rows() == 1);
  CHECK(em.entries(0, 0) == C(1));
  CHECK(em.entries(0, 1) == C(1));
  CHECK(em.M == 1);
  CHECK(em.B == 0);
  em = build_matrix<R>({pt({2, 3})}, set_of({{1, 1}, {0, 0}}));
  CHECK(em.entries(0, 0) == C(6));
  CHECK(em.entries(0, 1) == C(1));
  CHECK_THROWS(build_matrix<R>({}, MonomialSet{}));
  CHECK_THROWS(build_matrix<R>({pt({1})}, set_of({{1}})));
  CHECK_THROWS(build_matrix<R>({pt({1, 2}), pt({1, 3})}, set_of({{0, 0}, {1, 0}})));
  CHECK_THROWS(build_matrix<R>({pt({1})}, set_of({{0, 0}, {1, 0}})));
}

TEST_CASE("uniqueness check") {
  CHECK(uniqueness_check(build_matrix<R>({pt({1, 1})}, set_of({{1, 1}, {0, 0}}))).unique);
  const auto same = build_matrix<R>({pt({2, 1}), pt({2, 1})}, set_of({{0, 0}, {0, 1}, {1, 0}}));
  CHECK_FALSE(uniqueness_check(same).unique);
  const auto line = build_matrix<R>({pt({2}), pt({3})}, set_of({{0}, {1}, {2}}));
  const auto rep = uniqueness_check(line);
  CHECK(rep.unique);
  CHECK(rep.ratio > 0);
}

TEST_CASE("reconstruct small interpolants") {
  auto g = reconstruct(build_matrix<R>({pt({1, 1})}, set_of({{0, 0}, {1, 1}})));
  CHECK(abs(g.coefficient(Monomial({1, 1})) - C(1)) < 1e-60);
  CHECK(abs(g.coefficient(Monomial(2)) + C(1)) < 1e-60);

  g = reconstruct(build_matrix<R>({pt({1, -1})}, set_of({{0, 1}, {1, 0}})));
  CHECK(abs(g.coefficient(Monomial({1, 0})) - C(1)) < 1e-60);
  CHECK(abs(g.coefficient(Monomial({0, 1})) - C(1)) < 1e-60);

  g = reconstruct(build_matrix<R>({pt({2})}, set_of({{0}, {1}})));
  CHECK(abs(g.coefficient(Monomial(std::vector<std::uint32_t>{1})) - C(1)) < 1e-60);
  CHECK(abs(g.coefficient(Monomial(1)) + C(2)) < 1e-60);

  const auto same = build_matrix<R>({pt({2, 1}), pt({2, 1})}, set_of({{0, 0}, {0, 1}, {1, 0}}));
  CHECK_THROWS_AS(reconstruct(same), RankDeficient);
}

TEST_CASE("bounds") {
  CHECK(vandermonde_bound(2, R(1), R("0.5")) == 1);
  CHECK(vandermonde_bound(3, R(2), R(1)) == 24);
  CHECK(vandermonde_bound(5, R(3), R(0)) == 0);
  CHECK_THROWS(vandermonde_bound(1, R(1), R(1)));

  CHECK(abs(perturbed_bound(3, R(1), R(1), R("0.1")) - R("0.6")) < 1e-70);
  CHECK(perturbed_bound(4, R(2), R(1), R(0)) == 0);
  CHECK(abs(perturbed_bound(3, R(2), R("0.5"), R("0.01")) - R("0.06")) < 1e-70);
  CHECK_THROWS(perturbed_bound(2, R(1), R(1), R(1)));

  CHECK(abs(difference_bound(3, R(1), R(1), R("0.01")) - R("0.18")) < 1e-70);
  CHECK(difference_bound(5, R(2), R(3), R(0)) == 0);
  CHECK(abs(difference_bound(4, R(1), R(2), R("0.001")) - R("0.192")) < 1e-70);
  CHECK_THROWS(difference_bound(2, R(1), R(1), R(1)));
}

TEST_CASE("control error") {
  auto ce = control_error<R>(2, 3, R(1), R(1));
  // beta / (m m! M^(m-2) B) = (1/16) / 18
  CHECK(abs(ce.eps - R(1) / 288) < 1e-70);
  CHECK(ce.precision_bits == 64);
  ce = control_error<R>(10, 3, R(1), R(1));
  CHECK(abs(ce.eps - R(1) / 38880) < 1e-70);
  const auto a = control_error<R>(7, 4, R(3), R(2));
  const auto b = control_error<R>(7, 4, R(3), R(4));
  CHECK(abs(a.eps / b.eps - 2) < 1e-70);
  // m = 2 uses the two-point determinant bound 2 M B.
  CHECK(abs(control_error<R>(2, 2, R(1), R(1)).eps - R(1) / 32) < 1e-70);
  CHECK(control_error<R>(30, 8, R(50), R(50)).precision_bits > 64);
  CHECK_THROWS(control_error<R>(2, 3, R(0), R(1)));
  CHECK_THROWS(control_error<R>(2, 3, R(1), R(-1)));
}

TEST_CASE("row selection keeps independent rows") {
  CMatrix<R> rows(4, 3);
  rows << C(1), C(1), C(1),  //
      C(1), C(1), C(1),      //
      C(1), C(2), C(4),      //
      C(1), C(3), C(9);
  const auto pick = select_rows<R>(rows, 3);
  REQUIRE(pick.size() == 3);
  CHECK(std::count(pick.begin(), pick.end(), 2) == 1);
  CHECK(std::count(pick.begin(), pick.end(), 3) == 1);
}

TEST_CASE("property: cofactor expansion and null direction agree") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned nv = 1 + trial % 3;
    MonomialSet ms = monomial_candidates(2, nv);
    ms.monomials.resize(std::min<std::size_t>(ms.size(), 2 + trial % 4));
    std::vector<SamplePoint<R>> points(ms.size() - 1);
    for (auto& p : points) {
      for (unsigned i = 0; i < nv; ++i) p.coords.emplace_back(R(u(rng)), R(u(rng)));
    }
    const auto em = build_matrix<R>(points, ms);
    CVector<R> a = null_direction(em);
    CVector<R> b = cofactor_coefficients(em);
    // Align phase on the largest entry of a and compare normalized vectors.
    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < a.size(); ++i) {
      if (abs(a(i)) > abs(a(k))) k = i;
    }
    a /= a(k);
    b /= b(k);
    R diff(0);
    for (Eigen::Index i = 0; i < a.size(); ++i) diff = std::max(diff, R(abs(a(i) - b(i))));
    CHECK(diff <= 1e-10 * (1 + a.norm()));
  }
}

TEST_CASE("property: reconstruction residual at its own points") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto ms = monomial_candidates(2, 2);
    std::vector<SamplePoint<R>> points(ms.size() - 1);
    for (auto& p : points) p.coords = {C(R(u(rng)), R(u(rng))), C(R(u(rng)), R(u(rng)))};
    const auto em = build_matrix<R>(points, ms);
    const auto g = reconstruct(em);
    for (const auto& p : points) {
      CHECK(abs(evaluate<R>(g, p.coords)) <= R(ms.size()) * rank_tolerance(R(1)) * pow(1 + em.M, 2) * g.norm());
    }
  }
}
