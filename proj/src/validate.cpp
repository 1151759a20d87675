#include "hetsleep/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "hetsleep/analytic.hpp"
#include "hetsleep/montecarlo.hpp"
#include "hetsleep/report.hpp"
#include "hetsleep/specfun.hpp"

namespace hetsleep {

bool ValidateReport::all_pass() const {
  if (budget_exceeded) return false;
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.id << " [" << (r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL")) << "] " << r.title
     << ": " << r.detail << " (" << std::fixed;
  os.precision(1);
  os << r.seconds << " s)";
  return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

Scenario with_m(Scenario s, double m) {
  s.channel.m = m;
  return s;
}

std::size_t ue_tier_of_category(const Scenario& s, int category) {
  for (std::size_t u = 0; u < s.ue_tiers.size(); ++u)
    if (s.ue_tiers[u].category == category) return u;
  throw ConfigError("validate: scenario has no UE tier of category " + std::to_string(category));
}

// Shared simulation state, built on first use.
struct Shared {
  const Scenario& s;
  const ValidateOptions& opt;
  McConfig mc;
  std::optional<std::vector<LoadModel>> loads;
  std::optional<std::vector<LoadPmf>> sim_pmfs;
  double sim_pmf_seconds = 0.0;
  std::optional<McBank> bank;
  std::vector<McCase> cases;
  std::map<std::string, std::size_t> index;
  std::vector<double> taus;

  const std::vector<LoadModel>& load_models() {
    if (!loads) loads = build_load_models(s);
    return *loads;
  }
  const std::vector<LoadPmf>& pmfs() {
    if (!sim_pmfs) {
      const auto t0 = Clock::now();
      sim_pmfs = empirical_load_pmfs(s, mc, opt.load_realizations);
      sim_pmf_seconds = since(t0);
    }
    return *sim_pmfs;
  }
  static std::string key(const std::string& kind, double q, double power = 0.0, int antennas = 0) {
    std::ostringstream os;
    os << kind << "|" << q << "|" << power << "|" << antennas;
    return os.str();
  }
  const McBank& mc_bank() {
    if (bank) return *bank;
    const auto& pilot = pmfs();
    const std::size_t nk = s.bs_tiers.size();
    auto add = [&](const std::string& k, SleepPolicy p, std::optional<double> power, std::optional<int> m) {
      index[k] = cases.size();
      cases.push_back({k, std::move(p), power, m});
    };
    auto ss = [&](double q) { return empirical_strategic_policy(pilot, std::vector<double>(nk, q)); };
    for (double q : {0.1, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.8, 0.9, 1.0}) add(key("SS", q), ss(q), {}, {});
    for (double q : {0.25, 0.5, 0.75}) add(key("RS", q), random_policy(std::vector<double>(nk, q)), {}, {});
    for (double q : {1.0, 0.5, 0.25}) {
      for (int p = 20; p <= 60; ++p) add(key("SS", q, p), ss(q), static_cast<double>(p), {});
      for (int m : {8, 16, 32, 64, 128, 256}) add(key("SS", q, 0.0, m), ss(q), {}, m);
    }
    for (int t = -10; t <= 25; ++t) taus.push_back(t);
    bank = run_aakcp(s, mc, cases, taus);
    return *bank;
  }
  const McEstimate& est(const std::string& k, double tau_db) {
    const auto& b = mc_bank();
    const auto it = std::find(taus.begin(), taus.end(), tau_db);
    if (it == taus.end()) throw DomainError("validate: tau not on the simulation grid");
    return b.cases.at(index.at(k)).coverage[static_cast<std::size_t>(it - taus.begin())];
  }
  double ee(const Scenario& sc, const SleepPolicy& pol, double aakcp_v, double tau_db) {
    const auto q = pol.ratios();
    return energy_efficiency(area_spectral_efficiency(aakcp_v, db_to_linear(tau_db), sc), power_net(sc, q));
  }
  const SleepPolicy& policy(const std::string& k) {
    mc_bank();
    return cases.at(index.at(k)).policy;
  }
};

const char* title_of(int id) {
  switch (id) {
    case 1: return "load PMF cross-validation";
    case 2: return "mean-load conservation";
    case 3: return "AAKCP cross-validation";
    case 4: return "special-function identities";
    case 5: return "success-probability consistency";
    case 6: return "derivative checks";
    case 7: return "energy-efficiency optima";
    case 8: return "determinism";
    case 9: return "full suite runtime";
  }
  return "";
}

template <class T>
std::size_t argmax(const std::vector<T>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

CriterionResult c1_load_pmf(Shared& sh) {
  CriterionResult r{1, title_of(1), true, false, "", 0.0};
  Scenario s = sh.s;
  s.load.chi_mode = ChiMode::two_rc;
  std::ostringstream d;
  const auto& sim = sh.pmfs();
  const auto t0 = Clock::now();
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    const LoadModel m(s, k);
    const double tv = total_variation(m.pmf().p, sim[k].p);
    const double limit = s.bs_tiers[k].kind == BsKind::hotspot ? 0.07 : 0.05;
    r.pass = r.pass && tv <= limit;
    d << "tier " << s.bs_tiers[k].id << " TV=" << num(tv) << " (<= " << limit << "), ";
  }
  const double secs = since(t0) + sh.sim_pmf_seconds;
  r.pass = r.pass && secs <= 300.0;
  d << sh.opt.load_realizations << " realizations, " << num(secs, 3) << " s (<= 300)";
  r.detail = d.str();
  return r;
}

CriterionResult c2_mean_load(Shared& sh) {
  CriterionResult r{2, title_of(2), true, false, "", 0.0};
  const Scenario& s = sh.s;
  const double target = s.ue_density_total() / s.bs_density_total();
  double an = 0.0, mc = 0.0;
  const auto& loads = sh.load_models();
  const auto& sim = sh.pmfs();
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    const double w = s.bs_tiers[k].intensity / s.bs_density_total();
    an += w * loads[k].mean_load();
    mc += w * sim[k].mean();
  }
  const double e_an = std::abs(an - target) / target;
  const double e_mc = std::abs(mc - target) / target;
  r.pass = e_an <= 0.10 && e_mc <= 0.05;
  r.detail = "target " + num(target) + ", analytic " + num(an) + " (" + num(100 * e_an, 3) + "% <= 10%), mc " +
             num(mc) + " (" + num(100 * e_mc, 3) + "% <= 5%)";
  return r;
}

CriterionResult c3_aakcp(Shared& sh, const AnalyticConfig& cfg) {
  CriterionResult r{3, title_of(3), true, false, "", 0.0};
  const Scenario& s = sh.s;
  const auto& loads = sh.load_models();
  const std::size_t nk = s.bs_tiers.size();
  double worst = 0.0;
  std::string worst_at;
  std::map<double, double> an_at5, mc_at5;
  for (double q : {0.25, 0.5, 0.75, 1.0}) {
    const SleepPolicy pol = strategic_policy(loads, std::vector<double>(nk, q));
    for (double tau : {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0}) {
      const double a = aakcp(tau, s, pol, loads, cfg).aakcp;
      const double m = sh.est(Shared::key("SS", q), tau).value;
      if (tau == 5.0) {
        an_at5[q] = a;
        mc_at5[q] = m;
      }
      if (std::abs(a - m) > worst) {
        worst = std::abs(a - m);
        worst_at = "q=" + num(q) + " tau=" + num(tau) + " dB (analytic " + num(a) + ", mc " + num(m) + ")";
      }
    }
  }
  bool increasing = true;
  double prev_a = -1.0, prev_m = -1.0;
  for (const auto& [q, a] : an_at5) {
    increasing = increasing && a > prev_a && mc_at5[q] > prev_m;
    prev_a = a;
    prev_m = mc_at5[q];
  }
  r.pass = worst <= 0.03 && increasing;
  r.detail = "max |analytic - mc| = " + num(worst) + " (<= 0.03) at " + worst_at + "; increasing in q at 5 dB: " +
             (increasing ? "yes" : "no") + "; " + std::to_string(sh.mc.trials) + " trials";
  return r;
}

CriterionResult c4_specfun(Shared& sh, const AnalyticConfig& cfg) {
  CriterionResult r{4, title_of(4), true, false, "", 0.0};
  std::ostringstream d;
  double worst_f = 0.0;
  for (int i = 0; i <= 1099; ++i) {
    const double x = -10.0 + (10.99 * i) / 1099.0;
    worst_f = std::max(worst_f, std::abs(gauss_2f1(0.5, -0.5, 0.5, x) - std::sqrt(1.0 - x)));
  }
  const bool ok_f = worst_f <= 1e-10;
  d << "2F1 vs sqrt max err " << num(worst_f, 3) << "; ";

  double worst_z = 0.0;
  int in_range = 0, out_range = 0;
  for (double m : {1.0, 3.0}) {
    const Scenario s = with_m(sh.s, m);
    for (std::size_t k = 0; k < s.bs_tiers.size(); ++k)
      for (double rj : {2.0, 5.0, 10.0, 20.0, 50.0})
        for (double tau_db : {-10.0, 0.0, 5.0, 15.0})
          for (int l = 0; l < static_cast<int>(m); ++l) {
            const double sv = db_to_linear(tau_db) * m * std::pow(rj, s.channel.alpha) / s.gain_a(0);
            double closed = 0.0;
            try {
              closed = zeta_k_closed(sv, rj, k, 1.0, s, cfg, l);
            } catch (const SeriesOutOfRange&) {
              ++out_range;
              continue;
            }
            ++in_range;
            worst_z = std::max(worst_z, rel(closed, zeta_k_oracle(sv, rj, k, 1.0, s, l)));
          }
  }
  const bool ok_z = worst_z <= 1e-6 && in_range > 0;
  d << "zeta closed vs oracle max rel " << num(worst_z, 3) << " on " << in_range << " in-range points ("
    << out_range << " out of range); ";

  double worst_lt = 0.0;
  const Scenario& s = sh.s;
  const UserView u = UserView::for_ue_tier(s, ue_tier_of_category(s, 2), std::vector<double>(s.bs_tiers.size(), 1.0));
  AnalyticConfig quad = cfg;
  quad.lt_mode = LtMode::quadrature;
  for (double rj : {1.0, 5.0, 12.0, 19.0}) {
    worst_lt = std::max(worst_lt, std::abs(lt_coupled(0.0, rj, s, u, quad) - 1.0));
    worst_lt = std::max(worst_lt, std::abs(lt_coupled_oracle(0.0, rj, s, u) - 1.0));
    worst_lt = std::max(worst_lt, std::abs(lt_exp_derivatives(0, 0.0, rj, s, u, quad)[0] - 1.0));
    for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
      worst_lt = std::max(worst_lt, std::abs(std::exp(-zeta_k_oracle(0.0, rj, k, 1.0, s)) - 1.0));
      worst_lt = std::max(worst_lt, std::abs(std::exp(-zeta_k(0.0, rj, k, 1.0, s, quad)) - 1.0));
    }
  }
  const bool ok_lt = worst_lt <= 1e-9;
  d << "integral transforms at s=0 max |L-1| " << num(worst_lt, 3);
  r.pass = ok_f && ok_z && ok_lt;
  r.detail = d.str();
  return r;
}

CriterionResult c5_success_forms(Shared& sh, const AnalyticConfig& cfg) {
  CriterionResult r{5, title_of(5), true, false, "", 0.0};
  std::mt19937_64 rng(substream_seed(sh.opt.seed, 5));
  std::uniform_real_distribution<double> ur(1.0, 20.0), ut(-10.0, 15.0);
  const std::size_t nk = sh.s.bs_tiers.size();
  const std::vector<double> ones(nk, 1.0);

  // m = 1: Toeplitz exponential equals the scalar exponential.
  double w1 = 0.0;
  {
    const Scenario s = with_m(sh.s, 1.0);
    const UserView u = UserView::for_ue_tier(s, ue_tier_of_category(s, 3), ones);
    for (int i = 0; i < 20; ++i) {
      const double rj = ur(rng), tau = db_to_linear(ut(rng));
      for (std::size_t j = 0; j < nk; ++j) {
        const double sv = tau * std::pow(rj, s.channel.alpha) / s.gain_a(j);
        const double direct = std::exp(zeta_exp(sv, rj, s, u, cfg, 0));
        w1 = std::max(w1, rel(p_suc_toeplitz(tau, rj, static_cast<int>(j), s, u, cfg), direct));
      }
    }
  }
  // Leibniz expansion without a coupled BS equals the Toeplitz form.
  double w2 = 0.0;
  {
    const Scenario s = with_m(sh.s, 3.0);
    const UserView plain = UserView::for_ue_tier(s, ue_tier_of_category(s, 3), ones);
    UserView silent = UserView::for_ue_tier(s, ue_tier_of_category(s, 2), ones);
    silent.q0 = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double rj = ur(rng), tau = db_to_linear(ut(rng));
      for (std::size_t j = 0; j < nk; ++j) {
        const int jj = static_cast<int>(j);
        w2 = std::max(w2, rel(p_suc_leibniz(tau, rj, jj, s, plain, cfg), p_suc_toeplitz(tau, rj, jj, s, plain, cfg)));
        w2 = std::max(w2, rel(p_suc_leibniz(tau, rj, jj, s, silent, cfg), p_suc_toeplitz(tau, rj, jj, s, silent, cfg)));
      }
    }
  }
  // Finite LoS ball far beyond the network scale vs the unbounded form.
  double w3 = 0.0;
  {
    Scenario s = with_m(sh.s, 1.0);
    s.r_max = 1e5;
    const UserView u = UserView::for_ue_tier(s, ue_tier_of_category(s, 3), ones);
    for (int i = 0; i < 20; ++i) {
      const double rj = ur(rng), tau = db_to_linear(ut(rng));
      w3 = std::max(w3, rel(p_suc_toeplitz(tau, rj, 0, s, u, cfg), p_suc_asymptotic(tau, rj, 0, s, u)));
    }
  }
  r.pass = w1 <= 1e-12 && w2 <= 1e-9 && w3 <= 1e-3;
  r.detail = "m=1 scalar max rel " + num(w1, 3) + " (<= 1e-12); no coupled BS Leibniz vs Toeplitz " + num(w2, 3) +
             " (<= 1e-9); unbounded-ball form " + num(w3, 3) + " (<= 1e-3)";
  return r;
}

CriterionResult c6_derivatives(Shared& sh, const AnalyticConfig& cfg) {
  CriterionResult r{6, title_of(6), true, false, "", 0.0};
  const Scenario s = with_m(sh.s, 3.0);
  const std::vector<double> ones(s.bs_tiers.size(), 1.0);
  const UserView u = UserView::for_ue_tier(s, ue_tier_of_category(s, 2), ones);
  std::mt19937_64 rng(substream_seed(sh.opt.seed, 6));
  std::uniform_real_distribution<double> ur(1.0, 19.0), ut(-10.0, 15.0);
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double rj = ur(rng);
    const double sv = db_to_linear(ut(rng)) * s.channel.m * std::pow(rj, s.channel.alpha) / s.gain_a(0);
    const double h = 1e-4 * sv;
    const auto d = lt_exp_derivatives(2, sv, rj, s, u, cfg);
    const auto lo = lt_exp_derivatives(1, sv - h, rj, s, u, cfg);
    const auto hi = lt_exp_derivatives(1, sv + h, rj, s, u, cfg);
    e1 = std::max(e1, rel(d[1], (hi[0] - lo[0]) / (2 * h)));
    e2 = std::max(e2, rel(d[2], (hi[1] - lo[1]) / (2 * h)));
    const double c1 = lt_coupled(sv, rj, s, u, cfg, 1);
    const double fd = (lt_coupled(sv + h, rj, s, u, cfg, 0) - lt_coupled(sv - h, rj, s, u, cfg, 0)) / (2 * h);
    e3 = std::max(e3, rel(c1, fd));
  }
  r.pass = e1 <= 1e-4 && e2 <= 1e-4 && e3 <= 1e-4;
  r.detail = "max rel vs central differences: L_exp' " + num(e1, 3) + ", L_exp'' " + num(e2, 3) +
             ", coupled L' " + num(e3, 3) + " (each <= 1e-4, m=3, 20 points)";
  return r;
}

CriterionResult c7_optima(Shared& sh) {
  CriterionResult r{7, title_of(7), true, false, "", 0.0};
  const Scenario& s = sh.s;
  const double tau = s.tau_db;
  std::ostringstream d;

  // (a) strategic vs random at matched q
  bool a = true;
  for (double q : {0.25, 0.5, 0.75}) {
    const double ss = sh.ee(s, sh.policy(Shared::key("SS", q)), sh.est(Shared::key("SS", q), tau).value, tau);
    const double rs = sh.ee(s, sh.policy(Shared::key("RS", q)), sh.est(Shared::key("RS", q), tau).value, tau);
    a = a && ss >= rs;
  }
  d << "(a) " << (a ? "pass" : "FAIL") << "; ";

  // (b) optimum in q per epsilon
  const std::vector<double> qgrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> qstar;
  bool b_interior = true;
  for (double eps : {0.1, 0.29, 0.6}) {
    const Scenario se = apply_sweep_value(s, SweepParam::epsilon, eps);
    std::vector<double> ee;
    for (double q : qgrid) ee.push_back(sh.ee(se, sh.policy(Shared::key("SS", q)), sh.est(Shared::key("SS", q), tau).value, tau));
    const std::size_t i = argmax(ee);
    b_interior = b_interior && i > 0 && i + 1 < qgrid.size();
    qstar.push_back(qgrid[i]);
  }
  const bool b = b_interior && qstar[0] <= qstar[1] && qstar[1] <= qstar[2] && qstar[0] < qstar[2];
  d << "(b) " << (b ? "pass" : "FAIL") << " q* = " << qstar[0] << "/" << qstar[1] << "/" << qstar[2]
    << " for eps 0.1/0.29/0.6; ";

  // (c) optimal transmit power vs q
  std::vector<double> pstar;
  for (double q : {1.0, 0.5, 0.25}) {
    std::vector<double> ee;
    for (int p = 20; p <= 60; ++p) {
      const Scenario sp = apply_sweep_value(s, SweepParam::power_dbm, p);
      const std::string k = Shared::key("SS", q, p);
      ee.push_back(sh.ee(sp, sh.policy(k), sh.est(k, tau).value, tau));
    }
    pstar.push_back(20.0 + static_cast<double>(argmax(ee)));
  }
  const bool c = pstar[0] <= pstar[1] && pstar[1] <= pstar[2] && pstar[0] < pstar[2] && pstar[0] > 20.0 &&
                 pstar[2] < 60.0;
  d << "(c) " << (c ? "pass" : "FAIL") << " P* = " << pstar[0] << "/" << pstar[1] << "/" << pstar[2]
    << " dBm for q 1/0.5/0.25; ";

  // (d) interior optimum in M
  const std::vector<int> mgrid{8, 16, 32, 64, 128, 256};
  bool dd = true;
  std::vector<int> mstar;
  for (double q : {1.0, 0.5, 0.25}) {
    std::vector<double> ee;
    for (int m : mgrid) {
      const Scenario sm = apply_sweep_value(s, SweepParam::antennas, m);
      const std::string k = Shared::key("SS", q, 0.0, m);
      ee.push_back(sh.ee(sm, sh.policy(k), sh.est(k, tau).value, tau));
    }
    const std::size_t i = argmax(ee);
    dd = dd && i > 0 && i + 1 < mgrid.size();
    mstar.push_back(mgrid[i]);
  }
  d << "(d) " << (dd ? "pass" : "FAIL") << " M* = " << mstar[0] << "/" << mstar[1] << "/" << mstar[2]
    << " for q 1/0.5/0.25; ";

  // (e) optimal tau vs q
  std::vector<double> tstar;
  for (double q : {1.0, 0.75, 0.5, 0.25}) {
    std::vector<double> ee;
    for (double t : sh.taus) ee.push_back(sh.ee(s, sh.policy(Shared::key("SS", q)), sh.est(Shared::key("SS", q), t).value, t));
    tstar.push_back(sh.taus[argmax(ee)]);
  }
  bool e = tstar.back() < tstar.front();
  for (std::size_t i = 1; i < tstar.size(); ++i) e = e && tstar[i] <= tstar[i - 1];
  d << "(e) " << (e ? "pass" : "FAIL") << " tau* = " << tstar[0] << "/" << tstar[1] << "/" << tstar[2] << "/"
    << tstar[3] << " dB for q 1/0.75/0.5/0.25";
  r.pass = a && b && c && dd && e;
  r.detail = d.str();
  return r;
}

CriterionResult c8_determinism(Shared& sh) {
  CriterionResult r{8, title_of(8), true, false, "", 0.0};
  const Scenario& s = sh.s;
  auto body = [](const CsvTable& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
  };
  McConfig a = sh.mc;
  a.trials = 3000;
  a.pilot_realizations = 20;
  a.batch = 64;
  a.threads = 1;
  McConfig b = a;
  b.threads = 4;
  b.batch = 64;
  PolicyRequest pol;
  pol.kind = PolicyKind::strategic;
  pol.q = {0.5};
  LoadPmfRequest lp;
  lp.bs_tier_id = s.bs_tiers[0].id;
  lp.realizations = 20;
  SweepSpec sw;
  sw.param = SweepParam::q;
  sw.values = {0.5, 1.0};
  sw.curves = {{PolicyKind::strategic, 1.0}, {PolicyKind::random, 1.0}};
  const bool m_ok = body(metrics_table(s, pol, {0.0, 5.0}, Engine::mc, a)) ==
                    body(metrics_table(s, pol, {0.0, 5.0}, Engine::mc, b));
  const bool l_ok = body(loadpmf_table(s, lp, a)) == body(loadpmf_table(s, lp, b));
  const bool s_ok = body(sweep_table(s, sw, Engine::mc, a)) == body(sweep_table(s, sw, Engine::mc, b));
  r.pass = m_ok && l_ok && s_ok;
  r.detail = std::string("metrics ") + (m_ok ? "identical" : "DIFFER") + ", loadpmf " + (l_ok ? "identical" : "DIFFER") +
             ", sweep " + (s_ok ? "identical" : "DIFFER") + " across reruns with 1 and 4 threads";
  return r;
}

}  // namespace

ValidateReport run_validation(const Scenario& s, const ValidateOptions& opt,
                              const std::function<void(const CriterionResult&)>& on_result) {
  s.validate();
  const auto t0 = Clock::now();
  Shared sh{s, opt, {}, {}, {}, 0.0, {}, {}, {}, {}};
  sh.mc.trials = opt.mc_trials;
  sh.mc.seed = opt.seed;
  sh.mc.threads = opt.threads;
  sh.mc.pilot_realizations = opt.pilot_realizations;
  sh.mc.validate();
  const AnalyticConfig cfg;

  ValidateReport rep;
  auto wanted = [&](int id) { return opt.only.empty() || std::count(opt.only.begin(), opt.only.end(), id) > 0; };
  const std::vector<std::pair<int, std::function<CriterionResult()>>> checks{
      {4, [&] { return c4_specfun(sh, cfg); }},
      {5, [&] { return c5_success_forms(sh, cfg); }},
      {6, [&] { return c6_derivatives(sh, cfg); }},
      {1, [&] { return c1_load_pmf(sh); }},
      {2, [&] { return c2_mean_load(sh); }},
      {3, [&] { return c3_aakcp(sh, cfg); }},
      {7, [&] { return c7_optima(sh); }},
      {8, [&] { return c8_determinism(sh); }},
  };
  std::vector<CriterionResult> done;
  for (const auto& [id, fn] : checks) {
    if (!wanted(id)) continue;
    CriterionResult res;
    if (since(t0) > opt.budget_s) {
      rep.budget_exceeded = true;
      res = {id, title_of(id), false, true, "not run: time budget exhausted", 0.0};
    } else {
      const auto c0 = Clock::now();
      try {
        res = fn();
      } catch (const std::exception& e) {
        res = {id, title_of(id), false, false, std::string("error: ") + e.what(), 0.0};
      }
      res.seconds = since(c0);
    }
    if (on_result) on_result(res);
    done.push_back(res);
  }
  rep.seconds = since(t0);
  if (wanted(9)) {
    CriterionResult res{9, title_of(9), rep.seconds <= 1800.0 && !rep.budget_exceeded, false,
                        num(rep.seconds, 4) + " s (<= 1800)" + (opt.only.empty() ? "" : " for the selected checks"),
                        rep.seconds};
    if (on_result) on_result(res);
    done.push_back(res);
  }
  std::sort(done.begin(), done.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  rep.results = done;
  return rep;
}

}  // namespace hetsleep
