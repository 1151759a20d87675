#include "hetsleep/report.hpp"

#include <algorithm>
#include <sstream>

namespace hetsleep {

Engine engine_from_string(const std::string& name) {
  if (name == "analytic") return Engine::analytic;
  if (name == "mc") return Engine::mc;
  if (name == "both") return Engine::both;
  throw ConfigError("engine '" + name + "': expected analytic, mc or both");
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::analytic: return "analytic";
    case Engine::mc: return "mc";
    case Engine::both: return "both";
  }
  return "?";
}

std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::strategic: return "strategic";
    case PolicyKind::random: return "random";
    case PolicyKind::none: return "none";
  }
  return "?";
}

namespace {

std::string fmt(double v) { return format_number(v); }

std::string join_q(const std::vector<double>& q) {
  std::string out;
  for (std::size_t i = 0; i < q.size(); ++i) out += (i ? ";" : "") + fmt(q[i]);
  return out;
}

std::vector<double> per_tier(const std::vector<double>& v, std::size_t tiers, const char* what) {
  if (v.size() == 1) return std::vector<double>(tiers, v[0]);
  if (v.size() != tiers)
    throw ConfigError(std::string(what) + ": expected 1 or " + std::to_string(tiers) + " values");
  return v;
}

}  // namespace

CsvTable loadpmf_table(const Scenario& s, const LoadPmfRequest& req, const McConfig& mc) {
  const std::size_t k = s.bs_index(req.bs_tier_id);
  auto analytic = [&](ChiMode mode) {
    Scenario c = s;
    c.load.chi_mode = mode;
    LoadModel m(c, k);
    return req.min_radius ? m.conditional_pmf(*req.min_radius).p : m.pmf().p;
  };
  const auto two = analytic(ChiMode::two_rc);
  const auto zero = analytic(ChiMode::zero);
  std::vector<double> sim;
  if (req.with_mc) {
    if (req.min_radius) throw ConfigError("loadpmf: the simulated PMF is unconditional; drop --min-radius or --no-mc");
    sim = empirical_load_pmf(s, k, mc, req.realizations).p;
  }
  const std::size_t rows = req.size > 0 ? static_cast<std::size_t>(req.size) : two.size();
  auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; };
  CsvTable t;
  t.columns = {"n", "analytic_two_rc", "analytic_zero", "mc"};
  for (std::size_t i = 0; i < rows; ++i)
    t.rows.push_back({std::to_string(i), fmt(at(two, i)), fmt(at(zero, i)), req.with_mc ? fmt(at(sim, i)) : ""});
  if (req.with_mc)
    t.rows.push_back({"tv", fmt(total_variation(two, sim)), fmt(total_variation(zero, sim)), "0"});
  else
    t.rows.push_back({"tv", "", "", ""});
  return t;
}

SleepPolicy analytic_policy(const PolicyRequest& req, const std::vector<LoadModel>& loads) {
  const std::size_t n = loads.size();
  switch (req.kind) {
    case PolicyKind::none: return no_sleep_policy(n);
    case PolicyKind::random: return random_policy(per_tier(req.q, n, "q"));
    case PolicyKind::strategic:
      if (!req.mu.empty()) {
        if (req.mu.size() != n) throw ConfigError("mu: expected one threshold per BS tier");
        return threshold_policy(loads, req.mu);
      }
      return strategic_policy(loads, per_tier(req.q, n, "q"));
  }
  return no_sleep_policy(n);
}

SleepPolicy simulated_policy(const PolicyRequest& req, const Scenario& s, const McConfig& mc) {
  const std::size_t n = s.bs_tiers.size();
  switch (req.kind) {
    case PolicyKind::none: return no_sleep_policy(n);
    case PolicyKind::random: return random_policy(per_tier(req.q, n, "q"));
    case PolicyKind::strategic: {
      const auto pilot = empirical_load_pmfs(s, mc);
      if (!req.mu.empty()) {
        if (req.mu.size() != n) throw ConfigError("mu: expected one threshold per BS tier");
        SleepPolicy p;
        p.kind = PolicyKind::strategic;
        for (std::size_t k = 0; k < n; ++k) p.rules.push_back(rule_from_threshold(pilot[k], req.mu[k]));
        return p;
      }
      return empirical_strategic_policy(pilot, per_tier(req.q, n, "q"));
    }
  }
  return no_sleep_policy(n);
}

CsvTable metrics_table(const Scenario& s, const PolicyRequest& req, const std::vector<double>& tau_db,
                       Engine engine, const McConfig& mc, const AnalyticConfig& cfg) {
  s.validate();
  CsvTable t;
  t.columns = {"engine", "metric", "value", "user_tier", "k_star", "q", "tau_db", "ci_halfwidth", "trials"};
  auto row = [&](const std::string& eng, const std::string& metric, double v, const std::string& ut,
                 const std::string& ks, const std::vector<double>& q, double tau, const std::string& ci,
                 const std::string& trials) {
    t.rows.push_back({eng, metric, fmt(v), ut, ks, join_q(q), fmt(tau), ci, trials});
  };
  if (engine == Engine::analytic || engine == Engine::both) {
    const auto loads = build_load_models(s);
    const SleepPolicy pol = analytic_policy(req, loads);
    for (double tau : tau_db) {
      const MetricReport r = aakcp(tau, s, pol, loads, cfg);
      row("analytic", "aakcp", r.aakcp, "", "", r.q, tau, "", "");
      row("analytic", "ase", r.ase, "", "", r.q, tau, "", "");
      row("analytic", "power_net", r.power_net, "", "", r.q, tau, "", "");
      row("analytic", "ee", r.ee, "", "", r.q, tau, "", "");
      for (const auto& m : r.per_ue_tier) {
        const std::string ut = std::to_string(m.ue_tier);
        row("analytic", "aakcp_user_tier", m.aakcp, ut, "", r.q, tau, "", "");
        for (std::size_t i = 0; i < m.by_kstar.size(); ++i) {
          const std::string ks = i < s.bs_tiers.size() ? std::to_string(s.bs_tiers[i].id) : "0";
          row("analytic", "aakcp_kstar", m.by_kstar[i], ut, ks, r.q, tau, "", "");
        }
      }
    }
  }
  if (engine == Engine::mc || engine == Engine::both) {
    const SleepPolicy pol = simulated_policy(req, s, mc);
    const McBank bank = run_aakcp(s, mc, {McCase{"policy", pol, {}, {}}}, tau_db);
    const auto q = pol.kind == PolicyKind::none ? std::vector<double>(s.bs_tiers.size(), 1.0) : pol.ratios();
    const double p_net = power_net(s, q);
    const std::string trials = std::to_string(bank.trials);
    for (std::size_t i = 0; i < tau_db.size(); ++i) {
      const McEstimate& e = bank.cases[0].coverage[i];
      const double ase = area_spectral_efficiency(e.value, db_to_linear(tau_db[i]), s);
      const double scale = ase / std::max(e.value, 1e-300);
      row("mc", "aakcp", e.value, "", "", q, tau_db[i], fmt(e.half_width), trials);
      row("mc", "ase", ase, "", "", q, tau_db[i], fmt(scale * e.half_width), trials);
      row("mc", "power_net", p_net, "", "", q, tau_db[i], "0", trials);
      row("mc", "ee", energy_efficiency(ase, p_net), "", "", q, tau_db[i],
          fmt(e.value > 0.0 ? scale * e.half_width / p_net : 0.0), trials);
      for (std::size_t u = 0; u < s.ue_tiers.size(); ++u) {
        const McEstimate& pu = bank.cases[0].per_ue_tier[i][u];
        row("mc", "aakcp_user_tier", pu.value, std::to_string(s.ue_tiers[u].id), "", q, tau_db[i],
            fmt(pu.half_width), std::to_string(pu.trials));
      }
    }
  }
  return t;
}

std::vector<SweepRow> analytic_sweep(const Scenario& s, const SweepSpec& spec, const AnalyticConfig& cfg) {
  if (spec.values.empty()) throw ConfigError("sweep: empty value grid");
  std::vector<SweepCurve> curves = spec.curves;
  if (curves.empty()) curves.push_back({PolicyKind::strategic, spec.q});
  const auto loads = build_load_models(s);
  auto policy_for = [&](const SweepCurve& c, double q) {
    PolicyRequest r;
    r.kind = c.kind;
    r.q = {q};
    return analytic_policy(r, loads);
  };
  auto make = [&](const Scenario& sc, const std::string& curve, double x, double tau, const SleepPolicy& pol) {
    SweepRow row;
    row.curve = curve;
    row.x = x;
    row.tau_db = tau;
    const MetricReport r = aakcp(tau, sc, pol, loads, cfg);
    row.q = r.q;
    row.aakcp = {r.aakcp, 0.0, 0};
    row.ase = r.ase;
    row.power_net = r.power_net;
    row.ee = r.ee;
    return row;
  };
  std::vector<SweepRow> rows;
  for (const auto& c : curves) {
    switch (spec.param) {
      case SweepParam::tau_db:
        for (double v : spec.values) rows.push_back(make(s, c.label(), v, v, policy_for(c, c.q)));
        break;
      case SweepParam::q:
        for (double v : spec.values) rows.push_back(make(s, c.label(), v, spec.tau_db, policy_for(c, v)));
        break;
      case SweepParam::power_dbm:
      case SweepParam::antennas:
        // Load statistics do not depend on power or antennas.
        for (double v : spec.values)
          rows.push_back(make(apply_sweep_value(s, spec.param, v), c.label(), v, spec.tau_db, policy_for(c, c.q)));
        break;
      case SweepParam::epsilon: {
        const SweepRow base = make(s, c.label(), c.q, spec.tau_db, policy_for(c, c.q));
        for (double e : spec.values) {
          const Scenario sc = apply_sweep_value(s, SweepParam::epsilon, e);
          SweepRow r = base;
          std::ostringstream name;
          name << "eps=" << e << " " << (c.kind == PolicyKind::random ? "RS" : "SS");
          r.curve = name.str();
          r.power_net = power_net(sc, r.q);
          r.ee = energy_efficiency(r.ase, r.power_net);
          rows.push_back(r);
        }
        break;
      }
    }
  }
  if (spec.param == SweepParam::epsilon)
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.curve < b.curve; });
  mark_argmax(rows);
  return rows;
}

CsvTable sweep_table(const Scenario& s, const SweepSpec& spec, Engine engine, const McConfig& mc,
                     const AnalyticConfig& cfg) {
  s.validate();
  CsvTable t;
  t.columns = {"engine", "param", "curve", "x", "tau_db", "q", "aakcp", "ci_halfwidth", "trials",
               "ase", "power_net", "ee", "argmax"};
  auto emit = [&](const std::string& eng, const std::vector<SweepRow>& rows) {
    for (const auto& r : rows)
      t.rows.push_back({eng, to_string(spec.param), r.curve, fmt(r.x), fmt(r.tau_db), join_q(r.q),
                        fmt(r.aakcp.value), eng == "mc" ? fmt(r.aakcp.half_width) : "",
                        eng == "mc" ? std::to_string(r.aakcp.trials) : "", fmt(r.ase), fmt(r.power_net),
                        fmt(r.ee), r.argmax ? "1" : "0"});
  };
  if (engine == Engine::analytic || engine == Engine::both) emit("analytic", analytic_sweep(s, spec, cfg));
  if (engine == Engine::mc || engine == Engine::both) emit("mc", run_sweep(s, mc, spec));
  return t;
}

}  // namespace hetsleep
