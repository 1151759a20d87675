#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hetsleep/pointproc.hpp"

using namespace hetsleep;

TEST_CASE("minimum-image distance on the torus") {
  Region r{100.0, WrapMode::toroidal};
  CHECK(r.dist2({-49.0, 0.0}, {49.0, 0.0}) == doctest::Approx(4.0));
  CHECK(r.wrap_point({55.0, -51.0}) == Point{-45.0, 49.0});
  Region g{100.0, WrapMode::guard};
  CHECK(g.dist2({-49.0, 0.0}, {49.0, 0.0}) == doctest::Approx(98.0 * 98.0));
  CHECK_FALSE(g.contains({50.0, 0.0}));
}

TEST_CASE("HPPP count has Poisson mean and variance") {
  Rng rng(7);
  const Region r{1000.0, WrapMode::toroidal};
  const double lam = 5e-5, mean = lam * r.area();
  const int reps = 400;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double n = static_cast<double>(sample_hppp(lam, r, rng).size());
    s += n;
    s2 += n * n;
  }
  const double m = s / reps, v = s2 / reps - m * m;
  CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / reps));
  CHECK(v == doctest::Approx(mean).epsilon(0.25));
}

TEST_CASE("uniform disk sampling") {
  Rng rng(11);
  const Point c{3.0, -2.0};
  double r2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Point p = uniform_in_disk(c, 10.0, rng);
    const double d2 = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
    CHECK(d2 <= 100.0 + 1e-9);
    r2 += d2;
  }
  // E[R^2] = radius^2 / 2
  CHECK(r2 / n == doctest::Approx(50.0).epsilon(0.03));
}

TEST_CASE("Matern cluster daughters stay in their disks") {
  Rng rng(3);
  const Region r{2000.0, WrapMode::toroidal};
  const auto cp = sample_mcp(1e-5, 20.0, 30.0, r, rng);
  REQUIRE(cp.points.size() == cp.parent.size());
  for (std::size_t i = 0; i < cp.points.size(); ++i) {
    REQUIRE(cp.parent[i] >= 0);
    CHECK(r.dist2(cp.points[i], cp.parents[static_cast<std::size_t>(cp.parent[i])]) <= 900.0 + 1e-9);
    CHECK(r.contains(cp.points[i]));
  }
  const double expect = 1e-5 * r.area() * 20.0;
  CHECK(std::abs(static_cast<double>(cp.points.size()) - expect) < 6.0 * std::sqrt(expect * 21.0));
}

TEST_CASE("realizations are reproducible from the seed") {
  const Scenario s = table2_scenario();
  const Region r{s.window_side(), s.window.wrap};
  Rng a(42), b(42);
  const auto na = realize_network(s, r, a);
  const auto nb = realize_network(s, r, b);
  CHECK(na.bs == nb.bs);
  REQUIRE(na.ue.size() == nb.ue.size());
  for (std::size_t i = 0; i < na.ue.size(); ++i) CHECK(na.ue[i].points == nb.ue[i].points);
}

TEST_CASE("category-2 typical user gets its coupled BS within the cluster radius") {
  const Scenario s = table2_scenario();
  const Region r{s.window_side(), s.window.wrap};
  std::size_t cat2 = 0;
  for (std::size_t u = 0; u < s.ue_tiers.size(); ++u)
    if (s.ue_tiers[u].category == 2) cat2 = u;
  const double rm = s.ue_tiers[cat2].cluster_radius;
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto net = realize_network(s, r, rng);
    const TypicalUser tu = make_typical_user(net, s, cat2, false, rng);
    REQUIRE(tu.tier0_bs_tier.has_value());
    const Point bs = net.bs[*tu.tier0_bs_tier][*tu.tier0_bs];
    const double d = std::sqrt(bs.x * bs.x + bs.y * bs.y);
    CHECK(d >= s.r_min - 1e-9);
    CHECK(d <= rm + 1e-9);
  }
}
