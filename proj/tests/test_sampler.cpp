#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "varfactor/sampler.hpp"

using namespace varfactor;
using testing_util::P;
using testing_util::X12;

namespace {

using R = Float256;
using C = Complex<R>;

std::vector<C> roots_of(std::initializer_list<C> coeffs) {
  std::vector<C> a(coeffs);
  return univariate_roots<R>(a, ldexp(unit_roundoff<R>(), 32));
}

bool close(const C& a, const C& b, double tol = 1e-60) { return abs(a - b) < tol; }

SamplePoint<R> point(std::initializer_list<C> cs) {
  SamplePoint<R> p;
  p.coords = cs;
  return p;
}

ErrorBudget budget_for(long L) { return compute_budget(L); }

}  // namespace

TEST_CASE("univariate roots") {
  auto r = roots_of({C(1), C(0), C(1)});
  REQUIRE(r.size() == 2);
  CHECK(close(r[0], C(0, -1)));
  CHECK(close(r[1], C(0, 1)));

  r = roots_of({C(2), C(-3), C(1)});
  REQUIRE(r.size() == 2);
  CHECK(close(r[0], C(1)));
  CHECK(close(r[1], C(2)));

  r = roots_of({C(-5), C(2)});
  REQUIRE(r.size() == 1);
  CHECK(close(r[0], C(R(5) / 2)));

  // Exact zero roots are kept with their multiplicity.
  r = roots_of({C(0), C(0), C(-4), C(1)});
  REQUIRE(r.size() == 3);
  CHECK(std::count_if(r.begin(), r.end(), [](const C& z) { return z == C(0); }) == 2);
  CHECK(close(r[2], C(4)));

  CHECK_THROWS(roots_of({}));
  CHECK_THROWS(roots_of({C(3)}));
}

TEST_CASE("univariate roots against the quadratic formula") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const C b(u(rng), u(rng)), c(u(rng), u(rng));
    const auto r = roots_of({c, b, C(1)});
    const C disc = sqrt(b * b - R(4) * c);
    const C z1 = (-b + disc) / R(2), z2 = (-b - disc) / R(2);
    for (const auto& z : {z1, z2}) {
      CHECK(std::any_of(r.begin(), r.end(), [&](const C& w) { return close(w, z, 1e-50); }));
    }
  }
}

TEST_CASE("gradient check") {
  const R tol("1e-8");
  CHECK(gradient_check<R>(P("x1*x2 - 1", X12), point({C(1), C(1)}), tol));
  CHECK_FALSE(gradient_check<R>(P("x1^2 + x2", X12), point({C(0), C(0)}), tol));
  CHECK(gradient_check<R>(P("3*x1 - 2*x2 + 7", X12), point({C(5), C(-1)}), tol));
  CHECK_THROWS(gradient_check<R>(P("x1", X12), point({C(0)}), tol));
}

TEST_CASE("initial points") {
  std::mt19937_64 rng(42);
  auto pts = initial_points<R>(P("x1*x2 - 1", X12), rng, budget_for(2));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].variety_tag == 0);
  const C x1 = pts[0].coords[0];
  CHECK(x1.real() >= 1);
  CHECK(x1.real() <= 2);
  CHECK(close(pts[0].coords[1], C(1) / x1));

  pts = initial_points<R>(P("x2^2 - 3*x2 + 2", X12), rng, budget_for(2));
  REQUIRE(pts.size() == 2);
  std::vector<double> xs{pts[0].coords[1].real().convert_to<double>(), pts[1].coords[1].real().convert_to<double>()};
  std::sort(xs.begin(), xs.end());
  CHECK(xs[0] == doctest::Approx(1));
  CHECK(xs[1] == doctest::Approx(2));
  CHECK(pts[0].variety_tag != pts[1].variety_tag);

  CHECK_THROWS(initial_points<R>(P("x2", X12), rng, budget_for(2), {.solve_var = 0}));
}

TEST_CASE("neighborhood") {
  std::mt19937_64 rng(43);
  const auto lin = P("2*x1 + x2 - 1", X12);
  auto box = neighborhood<R>(lin, point({C(R(1) / 2), C(0)}), rng);
  CHECK(abs(box.half_widths[0] - R("0.15")) < 1e-70);
  CHECK(box.half_widths[1] == 0);

  const auto hyp = P("x1*x2 - 1", X12);
  box = neighborhood<R>(hyp, point({C(R("1.5")), C(R(2) / 3)}), rng);
  CHECK(box.half_widths[0] > 0);
  CHECK(box.half_widths[0] <= R("0.25") + 1e-70);

  CHECK_THROWS_AS(neighborhood<R>(P("x1^2 + x2", X12), point({C(0), C(0)}), rng), NoRegularPoint);
}

TEST_CASE("sampling follows the chosen branch") {
  std::mt19937_64 rng(44);
  const auto hyp = P("x1*x2 - 1", X12);
  auto p0 = point({C(R("1.5")), C(R(2) / 3)});
  auto box = neighborhood<R>(hyp, p0, rng);
  auto ss = sample_variety<R>(hyp, box, hyp.degree_profile(), budget_for(2));
  REQUIRE(ss.points.size() == 2);
  for (const auto& p : ss.points) CHECK(close(p.coords[1], C(1) / p.coords[0]));

  const auto par = P("x2^2 - x1", X12);
  const R root = sqrt(R("1.5"));
  p0 = point({C(R("1.5")), C(root)});
  SamplePoint<R> other = point({C(R("1.5")), C(-root)});
  other.variety_tag = 1;
  const std::vector<SamplePoint<R>> seeds{p0, other};
  box = neighborhood<R>(par, p0, rng);
  ss = sample_variety<R>(par, box, par.degree_profile(), budget_for(2), seeds);
  REQUIRE(ss.points.size() == 2);
  for (const auto& p : ss.points) {
    CHECK(p.variety_tag == 0);
    CHECK(close(p.coords[1], sqrt(p.coords[0])));
  }
  REQUIRE(ss.siblings.count(1) == 1);
  for (const auto& p : ss.siblings.at(1)) CHECK(close(p.coords[1], -sqrt(p.coords[0])));

  const auto view = branch_view(ss, 1);
  CHECK(view.primary_tag == 1);
  CHECK(view.points.size() == 2);
  CHECK(view.siblings.count(0) == 1);
  CHECK_THROWS(branch_view(ss, 7));
}

TEST_CASE("a collapsed box is rejected") {
  const auto hyp = P("x1*x2 - 1", X12);
  NeighborhoodBox<R> box;
  box.center = point({C(R("1.5")), C(R(2) / 3)});
  box.half_widths = {R(0), R(0)};
  box.solve_var = 1;
  CHECK_THROWS_AS(sample_variety<R>(hyp, box, hyp.degree_profile(), budget_for(2)), DegenerateSampling);
}

TEST_CASE("property: samples lie on the variety and seeds are deterministic") {
  const std::vector<std::string> v3{"x1", "x2", "x3"};
  const auto f = P("x1*x3^2 - x2*x3 + 1/3*x1 - 2", v3);
  const auto budget = budget_for(3);
  auto run = [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto seeds = initial_points<R>(f, rng, budget);
    const auto box = neighborhood<R>(f, seeds[0], rng);
    return sample_variety<R>(f, box, f.degree_profile(), budget, seeds);
  };
  const auto a = run(5), b = run(5);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].coords == b.points[i].coords);
    CHECK(a.points[i].residual <= ldexp(unit_roundoff<R>(), 32) * 1e3);
  }
  for (const auto& [tag, pts] : a.siblings) {
    for (const auto& p : pts) CHECK(p.residual <= ldexp(unit_roundoff<R>(), 32) * 1e3);
  }
}
