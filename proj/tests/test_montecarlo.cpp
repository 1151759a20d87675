#include <doctest.h>

#include <cmath>
#include <set>

#include "hetsleep/montecarlo.hpp"

using namespace hetsleep;

namespace {

std::size_t brute_nearest(const Region& r, const std::vector<std::vector<Point>>& bs, const Point& p) {
  std::size_t best = 0, g = 0;
  double bd = 1e300;
  for (const auto& tier : bs)
    for (const auto& b : tier) {
      const double d = r.dist2(p, b);
      if (d < bd) {
        bd = d;
        best = g;
      }
      ++g;
    }
  return best;
}

McConfig small(long trials, unsigned threads) {
  McConfig c;
  c.trials = trials;
  c.threads = threads;
  c.batch = 32;
  c.pilot_realizations = 10;
  return c;
}

}  // namespace

TEST_CASE("substream seeds are deterministic and distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(substream_seed(1, i));
  CHECK(seen.size() == 1000);
  CHECK(substream_seed(5, 17) == substream_seed(5, 17));
  CHECK(substream_seed(5, 17) != substream_seed(6, 17));
}

TEST_CASE("grid locator agrees with brute force") {
  Rng rng(21);
  for (WrapMode w : {WrapMode::toroidal, WrapMode::guard}) {
    const Region r{1500.0, w};
    const std::vector<std::vector<Point>> bs{sample_hppp(1e-4, r, rng), sample_hppp(2.5e-5, r, rng)};
    const BsLocator loc(r, bs);
    std::uniform_real_distribution<double> u(-750.0, 750.0);
    for (int i = 0; i < 2000; ++i) {
      const Point p{u(rng), u(rng)};
      CHECK(loc.nearest(p) == brute_nearest(r, bs, p));
    }
  }
}

TEST_CASE("every user is counted once") {
  const Scenario s = table2_scenario();
  Rng rng(2);
  const Region r{s.window_side(), s.window.wrap};
  const auto net = realize_network(s, r, rng);
  std::size_t users = 0;
  for (const auto& t : net.ue) users += t.points.size();
  long total = 0;
  for (long n : cell_loads(net)) total += n;
  CHECK(static_cast<std::size_t>(total) == users);
}

TEST_CASE("sleep application") {
  const Scenario s = table2_scenario();
  Rng rng(4);
  const Region r{s.window_side(), s.window.wrap};
  const auto net = realize_network(s, r, rng);
  const BsLocator loc(r, net.bs);
  const auto loads = cell_loads(net, loc);
  const std::vector<double> u(loc.size(), 0.5);
  for (char a : apply_sleep(loads, loc, no_sleep_policy(2), u)) CHECK(a == 1);
  for (char a : apply_sleep(loads, loc, random_policy({0.0, 0.0}), u)) CHECK(a == 0);
  SleepPolicy p;
  p.kind = PolicyKind::strategic;
  p.rules = {SleepRule{10, 0.0, 0.5, 0.5}, SleepRule{10, 0.0, 0.5, 0.5}};
  const auto awake = apply_sleep(loads, loc, p, u);
  for (std::size_t g = 0; g < loads.size(); ++g) CHECK((awake[g] == 1) == (loads[g] >= 10));
}

TEST_CASE("simulated load of uniform users has the density-ratio mean") {
  Scenario s = table2_scenario();
  UeTier u;
  u.id = 1;
  u.category = 3;
  u.intensity = 2e-3;
  s.ue_tiers = {u};
  const auto pmfs = empirical_load_pmfs(s, small(0, 1), 40);
  for (const auto& p : pmfs) CHECK(p.mean() == doctest::Approx(2e-3 / s.bs_density_total()).epsilon(0.05));
}

TEST_CASE("total variation") {
  CHECK(total_variation({0.5, 0.5}, {0.5, 0.5}) == 0.0);
  CHECK(total_variation({1.0}, {0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(total_variation({0.2, 0.8}, {0.4, 0.6}) == doctest::Approx(0.2));
}

TEST_CASE("simulated coverage: bounds, no active BS, thread invariance") {
  const Scenario s = table2_scenario();
  const std::vector<double> taus{0.0, 10.0};
  const std::vector<McCase> cases{{"all", no_sleep_policy(2), {}, {}}, {"off", random_policy({0.0, 0.0}), {}, {}}};
  const McBank a = run_aakcp(s, small(400, 1), cases, taus);
  const McBank b = run_aakcp(s, small(400, 3), cases, taus);
  REQUIRE(a.cases.size() == 2);
  for (std::size_t t = 0; t < taus.size(); ++t) {
    CHECK(a.cases[0].coverage[t].value == b.cases[0].coverage[t].value);
    CHECK(a.cases[0].coverage[t].value > 0.0);
    CHECK(a.cases[1].coverage[t].value == 0.0);
  }
  CHECK(a.cases[0].coverage[1].value <= a.cases[0].coverage[0].value);
  CHECK(a.cases[0].awake_fraction == doctest::Approx(1.0));
}

TEST_CASE("sweep bookkeeping") {
  CHECK(sweep_param_from_string("antennas") == SweepParam::antennas);
  CHECK(to_string(SweepParam::power_dbm) == "power_dbm");
  CHECK_THROWS_AS(sweep_param_from_string("bogus"), ConfigError);
  CHECK(SweepCurve{PolicyKind::random, 0.5}.label() == "RS(0.5)");
  CHECK(SweepCurve{PolicyKind::none, 1.0}.label() == "none");

  std::vector<SweepRow> rows(4);
  rows[0].curve = rows[1].curve = "a";
  rows[2].curve = rows[3].curve = "b";
  rows[0].ee = 1.0;
  rows[1].ee = 2.0;
  rows[2].ee = 5.0;
  rows[3].ee = 3.0;
  mark_argmax(rows);
  CHECK_FALSE(rows[0].argmax);
  CHECK(rows[1].argmax);
  CHECK(rows[2].argmax);
  CHECK_FALSE(rows[3].argmax);

  const Scenario s = table2_scenario();
  const Scenario e = apply_sweep_value(s, SweepParam::epsilon, 0.1);
  CHECK(e.bs_tiers[0].p_sleep_w == doctest::Approx(0.1 * s.bs_tiers[0].p_stat_w));
  CHECK(apply_sweep_value(s, SweepParam::antennas, 16).bs_tiers[1].antennas == 16);
}
