#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hetsleep/load.hpp"
#include "hetsleep/quadrature.hpp"

using namespace hetsleep;

namespace {

Scenario uniform_users(double ue_intensity) {
  Scenario s = table2_scenario();
  UeTier u;
  u.id = 1;
  u.category = 3;
  u.intensity = ue_intensity;
  s.ue_tiers = {u};
  return s;
}

LoadPmf handmade(std::vector<double> p) {
  LoadPmf f;
  f.p = std::move(p);
  return f;
}

}  // namespace

TEST_CASE("lens fraction") {
  CHECK(xi(5.0, 0.0, 10.0) == doctest::Approx(0.25));
  CHECK(xi(20.0, 0.0, 10.0) == doctest::Approx(1.0));
  CHECK(xi(5.0, 100.0, 10.0) == 0.0);
  CHECK(xi(200.0, 100.0, 10.0) == doctest::Approx(1.0));
  // equal radii at distance r: 2 acos(1/2) - sqrt(3)/2 over pi
  const double equal = (2.0 * std::acos(0.5) - std::sqrt(3.0) / 2.0) / std::numbers::pi;
  CHECK(xi(10.0, 10.0, 10.0) == doctest::Approx(equal).epsilon(1e-12));
  for (double w : {0.0, 3.0, 8.0, 15.0}) {
    double prev = -1.0;
    for (double r = 0.5; r < 40.0; r += 0.5) {
      const double v = xi(r, w, 10.0);
      CHECK(v >= prev - 1e-15);
      CHECK(v <= 1.0 + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("uniform-user PGF is Poisson in the disk area") {
  const std::complex<double> th(0.3, 0.4);
  const double area = std::numbers::pi * 25.0;
  CHECK(std::abs(pgf_cat3(th, 5.0, 0.01) - std::exp(0.01 * area * (th - 1.0))) < 1e-14);
  CHECK(std::abs(pgf_cat3(1.0, 5.0, 0.01) - 1.0) < 1e-15);
}

TEST_CASE("cell radius law") {
  const Scenario s = table2_scenario();
  const double lam = s.bs_density_total();
  CHECK(cell_radius_omega(s) == doctest::Approx(1.0 / (std::numbers::pi * lam)));
  const double hi = 20.0 / std::sqrt(lam);
  CHECK(integrate([&](double r) { return cell_radius_pdf(s, r); }, 0.0, hi, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  const double area = integrate([&](double r) { return std::numbers::pi * r * r * cell_radius_pdf(s, r); }, 0.0, hi, 1e-12);
  CHECK(area == doctest::Approx(1.0 / lam).epsilon(1e-9));
  CHECK(cell_radius_ccdf(s, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("uniform users: mean load is the density ratio") {
  const Scenario s = uniform_users(2e-3);
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    const LoadModel m(s, k);
    const double expect = 2e-3 / s.bs_density_total();
    CHECK(m.mean_load() == doctest::Approx(expect).epsilon(1e-6));
    CHECK(m.pmf().mean() == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("reference-scenario PMFs are proper and Palm conditioning shifts them up") {
  const Scenario s = table2_scenario();
  const auto models = build_load_models(s);
  for (const auto& m : models) {
    const auto& p = m.pmf().p;
    double sum = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.pmf().mean() == doctest::Approx(m.mean_load()).epsilon(1e-6));
    double prev = m.mean_load();
    for (double r : {20.0, 40.0, 60.0}) {
      const double c = m.mean_load(r);
      CHECK(c > prev);
      CHECK(m.conditional_pmf(r).mean() == doctest::Approx(c).epsilon(1e-5));
      prev = c;
    }
  }
}

TEST_CASE("threshold from ratio on a hand-made PMF") {
  const LoadPmf f = handmade({0.2, 0.3, 0.5});
  CHECK(f.tail(1) == doctest::Approx(0.8));
  const SleepRule exact = threshold_from_ratio(f, 0.6);
  CHECK(exact.mu == 2);
  CHECK(exact.boundary_prob == doctest::Approx(1.0 / 3.0));
  CHECK(exact.achieved_q == doctest::Approx(0.6));
  CHECK(exact.awake_given_load(0) == 0.0);
  CHECK(exact.awake_given_load(1) == doctest::Approx(1.0 / 3.0));
  CHECK(exact.awake_given_load(5) == 1.0);
  const SleepRule coarse = threshold_from_ratio(f, 0.6, false);
  CHECK(coarse.mu == 1);
  CHECK(coarse.achieved_q == doctest::Approx(0.8));
  CHECK(rule_from_threshold(f, 2).achieved_q == doctest::Approx(0.5));
  CHECK(threshold_from_ratio(f, 0.0).achieved_q == doctest::Approx(0.0));
  CHECK(threshold_from_ratio(f, 1.0).achieved_q == doctest::Approx(1.0));
}

TEST_CASE("strategic policy achieves the requested ratio and thresholds grow as q falls") {
  const Scenario s = table2_scenario();
  const auto models = build_load_models(s);
  long prev_mu = -1;
  for (double q : {1.0, 0.75, 0.5, 0.25, 0.1}) {
    const SleepPolicy p = strategic_policy(models, {q, q});
    for (std::size_t k = 0; k < models.size(); ++k) CHECK(p.q(k) == doctest::Approx(q).epsilon(1e-9));
    CHECK(p.rules[0].mu >= prev_mu);
    prev_mu = p.rules[0].mu;
  }
  const SleepPolicy r = random_policy({0.3, 0.7});
  CHECK(r.ratios() == std::vector<double>{0.3, 0.7});
  CHECK(no_sleep_policy(2).ratios() == std::vector<double>{1.0, 1.0});
}
