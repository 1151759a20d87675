#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hetsleep/analytic.hpp"
#include "hetsleep/channel.hpp"
#include "hetsleep/quadrature.hpp"

using namespace hetsleep;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t tier_of_category(const Scenario& s, int c) {
  for (std::size_t u = 0; u < s.ue_tiers.size(); ++u)
    if (s.ue_tiers[u].category == c) return u;
  return 0;
}

// Rayleigh interference exponent of tier k by direct integration over
// distance and the uniform beam offset u in [-1, 1].
double rayleigh_zeta(double sv, double rj, std::size_t k, const Scenario& s) {
  const auto& t = s.bs_tiers[k];
  const double a = s.gain_a(k);
  const int m = t.antennas;
  auto inner = [&](double dist) {
    auto f = [&](double u) {
      const double x = sv * a * kernel_cosine(0.5 * u, m) * std::pow(dist, -s.channel.alpha);
      return 0.5 * x / (1.0 + x);
    };
    const double edge = 2.0 / m;
    return 2.0 * integrate(f, 0.0, edge, 1e-12);
  };
  return 2.0 * kPi * t.intensity * integrate([&](double d) { return d * inner(d); }, rj, s.r_max, 1e-11);
}

}  // namespace

TEST_CASE("nearest-distance laws") {
  CHECK(distance_ccdf(1e-4, 50.0, 1.0) == doctest::Approx(std::exp(-1e-4 * kPi * (2500.0 - 1.0))));
  CHECK(distance_ccdf(1e-4, 0.5, 1.0) == 1.0);
  const double mass = integrate([](double r) { return distance_pdf(1e-4, r, 1.0); }, 1.0, 2000.0, 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(coupled_distance_ccdf(20.0, 1.0, 40.0) == doctest::Approx((1600.0 - 400.0) / (1600.0 - 1.0)));
  const double cm = integrate([](double r) { return coupled_distance_pdf(r, 1.0, 40.0); }, 1.0, 40.0, 1e-12);
  CHECK(cm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interference exponent: every route agrees with direct Rayleigh integration") {
  const Scenario s = table2_scenario();
  AnalyticConfig quad;
  quad.lt_mode = LtMode::quadrature;
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    for (double rj : {3.0, 15.0, 60.0}) {
      for (double tau_db : {-5.0, 5.0}) {
        const double sv = db_to_linear(tau_db) * std::pow(rj, s.channel.alpha) / s.gain_a(0);
        const double ref = rayleigh_zeta(sv, rj, k, s);
        CHECK(zeta_k_oracle(sv, rj, k, 1.0, s) == doctest::Approx(ref).epsilon(1e-7));
        CHECK(zeta_k(sv, rj, k, 1.0, s, quad) == doctest::Approx(ref).epsilon(1e-7));
        CHECK(zeta_k(sv, rj, k, 1.0, s) == doctest::Approx(ref).epsilon(1e-7));
        CHECK(zeta_k(sv, rj, k, 0.4, s) == doctest::Approx(0.4 * ref).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("cross-check mode records the closed-form gap") {
  Scenario s = table2_scenario();
  s.channel.m = 3.0;
  AnalyticConfig cc;
  cc.lt_mode = LtMode::cross_check;
  cross_check_discrepancy().store(0.0);
  const double sv = 2.0 * std::pow(10.0, s.channel.alpha) / s.gain_a(0);
  for (int l = 0; l < 3; ++l) zeta_k(sv, 10.0, 0, 1.0, s, cc, l);
  CHECK(cross_check_discrepancy().load() < 1e-6);
}

TEST_CASE("derivatives of the interference exponent match finite differences") {
  Scenario s = table2_scenario();
  s.channel.m = 3.0;
  const double rj = 8.0;
  const double sv = 0.7 * std::pow(rj, s.channel.alpha) / s.gain_a(0);
  const double h = 1e-4 * sv;
  for (int l = 0; l < 2; ++l) {
    const double fd = (zeta_k(sv + h, rj, 1, 1.0, s, {}, l) - zeta_k(sv - h, rj, 1, 1.0, s, {}, l)) / (2.0 * h);
    CHECK(zeta_k(sv, rj, 1, 1.0, s, {}, l + 1) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("success probability: Rayleigh reduces to the scalar exponential") {
  Scenario s = table2_scenario();
  s.channel.m = 1.0;
  const UserView u = UserView::for_ue_tier(s, tier_of_category(s, 3), {1.0, 1.0});
  for (double rj : {5.0, 25.0}) {
    const double tau = db_to_linear(3.0);
    const double sv = tau * std::pow(rj, s.channel.alpha) / s.gain_a(0);
    double z = sv * s.channel.noise_power;
    for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) z += rayleigh_zeta(sv, rj, k, s);
    CHECK(p_suc_toeplitz(tau, rj, 0, s, u) == doctest::Approx(std::exp(-z)).epsilon(1e-7));
  }
}

TEST_CASE("square-root special case agrees with the general unbounded form") {
  Scenario s = table2_scenario();
  s.channel.m = 1.0;
  const UserView u = UserView::for_ue_tier(s, tier_of_category(s, 3), {1.0, 0.5});
  for (double rj : {2.0, 10.0, 30.0})
    for (double tau_db : {-10.0, 0.0, 10.0}) {
      const double tau = db_to_linear(tau_db);
      CHECK(p_suc_asymptotic(tau, rj, 1, s, u) == doctest::Approx(p_suc_asymptotic(tau, rj, 1, s, u, true)).epsilon(1e-8));
    }
}

TEST_CASE("success probability is decreasing in tau and in distance") {
  Scenario s = table2_scenario();
  s.channel.m = 3.0;
  const UserView u = UserView::for_ue_tier(s, tier_of_category(s, 2), {1.0, 1.0});
  double prev = 1.0;
  for (double tau_db = -10.0; tau_db <= 20.0; tau_db += 5.0) {
    const double p = p_suc(db_to_linear(tau_db), 12.0, 0, true, s, u);
    CHECK(p <= prev + 1e-12);
    CHECK(p >= 0.0);
    prev = p;
  }
  prev = 1.0;
  for (double rj : {2.0, 10.0, 40.0, 120.0}) {
    const double p = p_suc(db_to_linear(5.0), rj, 0, true, s, u);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
  CHECK(p_suc_toeplitz(1.0, s.r_max + 1.0, 0, s, u) == 0.0);
}

TEST_CASE("metrics: association mass, sleeping everything, monotonicity") {
  const Scenario s = table2_scenario();
  const auto loads = build_load_models(s);
  const MetricReport full = aakcp(5.0, s, strategic_policy(loads, {1.0, 1.0}), loads);
  for (const auto& m : full.per_ue_tier) CHECK(m.association_mass == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(full.aakcp > 0.0);
  CHECK(full.aakcp < 1.0);

  const MetricReport off = aakcp(5.0, s, random_policy({0.0, 0.0}), loads);
  CHECK(off.aakcp == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(off.ee == doctest::Approx(0.0).epsilon(1e-12));
  double sleep = 0.0;
  for (const auto& t : s.bs_tiers) sleep += t.intensity * t.p_sleep_w;
  CHECK(off.power_net == doctest::Approx(sleep));

  const MetricReport hi = aakcp(15.0, s, strategic_policy(loads, {1.0, 1.0}), loads);
  CHECK(hi.aakcp < full.aakcp);
  const MetricReport half = aakcp(5.0, s, strategic_policy(loads, {0.5, 0.5}), loads);
  CHECK(half.aakcp < full.aakcp);
  const MetricReport rs = aakcp(5.0, s, random_policy({0.5, 0.5}), loads);
  CHECK(rs.aakcp < half.aakcp);
}

TEST_CASE("power model and efficiency") {
  const Scenario s = table2_scenario();
  const auto& t = s.bs_tiers[0];
  const double active = t.p_stat_w + t.antennas * s.power.p_a_w + s.power.delta_p * t.tx_power_w();
  CHECK(bs_power(s, 0, 1.0) == doctest::Approx(active));
  CHECK(bs_power(s, 0, 0.25) == doctest::Approx(0.75 * t.p_sleep_w + 0.25 * active));
  CHECK(area_spectral_efficiency(0.5, 3.0, s) == doctest::Approx(s.bs_density_total() * 0.5 * 2.0));
  CHECK(energy_efficiency(2.0, 4.0) == doctest::Approx(0.5));
}
