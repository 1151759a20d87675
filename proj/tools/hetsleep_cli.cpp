#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetsleep/load.hpp"
#include "hetsleep/report.hpp"
#include "hetsleep/specfun.hpp"
#include "hetsleep/validate.hpp"

using namespace hetsleep;

namespace {

enum Exit { kOk = 0, kNumerical = 1, kConfig = 2, kValidation = 3, kBudget = 4 };

enum class Level { error, warn, info, debug };
Level g_level = Level::warn;

void log(Level l, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (l <= g_level) std::cerr << "[" << names[static_cast<int>(l)] << "] " << msg << "\n";
}

struct Global {
  std::string scenario;
  std::uint64_t seed = 1;
  std::string out;
  std::string engine = "analytic";
  std::string log = "warn";
};

struct McOptions {
  long trials = 100000;
  unsigned threads = 0;
  long pilot = 200;
  std::string kernel = "cosine";
};

Scenario load(const Global& g) {
  Scenario s = g.scenario.empty() ? table2_scenario() : load_scenario_file(g.scenario);
  s.validate();
  return s;
}

McConfig mc_config(const Global& g, const McOptions& o) {
  McConfig c;
  c.trials = o.trials;
  c.seed = g.seed;
  c.threads = o.threads;
  c.pilot_realizations = o.pilot;
  if (o.kernel == "cosine")
    c.kernel = Kernel::cosine;
  else if (o.kernel == "actual")
    c.kernel = Kernel::actual;
  else
    throw ConfigError("kernel '" + o.kernel + "': expected cosine or actual");
  c.validate();
  return c;
}

void emit(const Global& g, const std::string& body) {
  if (g.out.empty() || g.out == "-") {
    std::cout << body;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw ConfigError("--out " + g.out + ": cannot open for writing");
  f << body;
  log(Level::info, "wrote " + g.out);
}

std::string csv_body(const CsvTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

std::string json_body(const CsvTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json o;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      double v = 0.0;
      const auto* end = r[i].data() + r[i].size();
      const auto res = std::from_chars(r[i].data(), end, v);
      if (!r[i].empty() && res.ec == std::errc() && res.ptr == end)
        o[t.columns[i]] = v;
      else
        o[t.columns[i]] = r[i];
    }
    rows.push_back(o);
  }
  nlohmann::json doc{{"schema", kCsvSchema}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

PolicyKind policy_kind(const std::string& name) {
  if (name == "strategic" || name == "SS") return PolicyKind::strategic;
  if (name == "random" || name == "RS") return PolicyKind::random;
  if (name == "none") return PolicyKind::none;
  throw ConfigError("policy '" + name + "': expected strategic, random or none");
}

// "SS:0.5", "RS:0.25", "none"
SweepCurve parse_curve(const std::string& text) {
  const auto colon = text.find(':');
  SweepCurve c;
  c.kind = policy_kind(text.substr(0, colon));
  if (colon != std::string::npos) {
    try {
      c.q = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("curve '" + text + "': bad ratio");
    }
  } else if (c.kind != PolicyKind::none) {
    throw ConfigError("curve '" + text + "': expected KIND:q");
  }
  return c;
}

std::vector<double> grid(const std::vector<double>& values, std::optional<double> from, std::optional<double> to,
                         int steps) {
  if (!values.empty()) return values;
  if (!from || !to) throw ConfigError("sweep: give --values or --from/--to");
  if (*to < *from) throw ConfigError("sweep: --to must not be below --from");
  if (steps < 1) throw ConfigError("sweep: --steps must be at least 1");
  std::vector<double> v;
  for (int i = 0; i < steps; ++i) v.push_back(steps == 1 ? *from : *from + (*to - *from) * i / (steps - 1));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage and energy efficiency of sleep-controlled heterogeneous networks"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--scenario", g.scenario, "Scenario JSON (default: built-in two-tier reference)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output path (default stdout)");
  app.add_option("--engine", g.engine, "analytic, mc or both");
  app.add_option("--log", g.log, "error, warn, info or debug");

  McOptions mo;
  auto add_mc = [&](CLI::App* c) {
    c->add_option("--trials", mo.trials, "Monte-Carlo trials");
    c->add_option("--threads", mo.threads, "Worker threads (0: all cores)");
    c->add_option("--pilot", mo.pilot, "Realizations for simulated strategic thresholds");
    c->add_option("--kernel", mo.kernel, "Beam gain used by the simulator: cosine or actual");
  };

  LoadPmfRequest lp;
  double min_radius = -1.0;
  bool no_mc = false;
  auto* c_load = app.add_subcommand("loadpmf", "Analytic and simulated load PMF of one BS tier");
  c_load->add_option("--tier", lp.bs_tier_id, "BS tier id");
  c_load->add_option("--size", lp.size, "Rows (default: DFT size)");
  c_load->add_option("--min-radius", min_radius, "Condition on cell radius at least this (m)");
  c_load->add_flag("--no-mc", no_mc, "Skip the simulated column");
  c_load->add_option("--realizations", lp.realizations, "Simulated networks");
  add_mc(c_load);

  std::string policy = "strategic";
  std::vector<double> q{1.0};
  std::vector<long> mu;
  std::vector<double> taus;
  std::string format = "csv";
  auto add_policy = [&](CLI::App* c) {
    c->add_option("--policy", policy, "strategic, random or none");
    c->add_option("--q", q, "Active ratio, one value or one per BS tier")->delimiter(',');
    c->add_option("--mu", mu, "Strategic thresholds, one per BS tier")->delimiter(',');
    c->add_option("--tau-db", taus, "SINR thresholds (dB)")->delimiter(',');
    c->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* c_metrics = app.add_subcommand("metrics", "AAKCP, ASE, network power and EE for one policy");
  add_policy(c_metrics);
  add_mc(c_metrics);
  auto* c_mc = app.add_subcommand("mc", "Simulated AAKCP with confidence intervals (per user tier)");
  add_policy(c_mc);
  add_mc(c_mc);

  std::string param = "tau_db";
  std::vector<double> values;
  std::optional<double> from, to;
  int steps = 36;
  std::vector<std::string> curves;
  double sweep_tau = 5.0;
  auto* c_sweep = app.add_subcommand("sweep", "EE sweep over one parameter with argmax flags");
  c_sweep->add_option("--param", param, "tau_db, q, power_dbm, antennas or epsilon");
  c_sweep->add_option("--values", values, "Explicit grid")->delimiter(',');
  c_sweep->add_option("--from", from, "Grid start");
  c_sweep->add_option("--to", to, "Grid end");
  c_sweep->add_option("--steps", steps, "Grid points");
  c_sweep->add_option("--curves", curves, "Curves: SS:q, RS:q or none")->delimiter(',');
  c_sweep->add_option("--tau-db", sweep_tau, "Fixed threshold when not swept (dB)");
  add_mc(c_sweep);

  ValidateOptions vo;
  auto* c_val = app.add_subcommand("validate", "Run the acceptance checks");
  c_val->add_option("--budget", vo.budget_s, "Time budget (s)");
  c_val->add_option("--trials", vo.mc_trials, "Monte-Carlo trials per point");
  c_val->add_option("--load-realizations", vo.load_realizations, "Networks for the load PMF checks");
  c_val->add_option("--pilot", vo.pilot_realizations, "Networks for simulated strategic thresholds");
  c_val->add_option("--threads", vo.threads, "Worker threads (0: all cores)");
  c_val->add_option("--only", vo.only, "Criterion ids to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (g.log == "error")
      g_level = Level::error;
    else if (g.log == "warn")
      g_level = Level::warn;
    else if (g.log == "info")
      g_level = Level::info;
    else if (g.log == "debug")
      g_level = Level::debug;
    else
      throw ConfigError("--log '" + g.log + "': expected error, warn, info or debug");

    const Scenario s = load(g);
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s";
    };

    if (*c_load) {
      if (min_radius >= 0.0) lp.min_radius = min_radius;
      lp.with_mc = !no_mc;
      emit(g, csv_body(loadpmf_table(s, lp, mc_config(g, mo))));
    } else if (*c_metrics || *c_mc) {
      PolicyRequest req;
      req.kind = policy_kind(policy);
      req.q = q;
      req.mu = mu;
      if (taus.empty()) taus = {s.tau_db};
      const Engine e = *c_mc ? Engine::mc : engine_from_string(g.engine);
      const CsvTable t = metrics_table(s, req, taus, e, mc_config(g, mo));
      emit(g, format == "json" ? json_body(t) : csv_body(t));
    } else if (*c_sweep) {
      SweepSpec spec;
      spec.param = sweep_param_from_string(param);
      spec.values = grid(values, from, to, steps);
      for (const auto& c : curves) spec.curves.push_back(parse_curve(c));
      spec.tau_db = sweep_tau;
      emit(g, csv_body(sweep_table(s, spec, engine_from_string(g.engine), mc_config(g, mo))));
    } else if (*c_val) {
      vo.seed = g.seed;
      CsvTable t;
      t.columns = {"id", "title", "pass", "skipped", "seconds", "detail"};
      const ValidateReport rep = run_validation(s, vo, [&](const CriterionResult& r) {
        std::cerr << format_result(r) << "\n";
        t.rows.push_back({std::to_string(r.id), r.title, r.pass ? "1" : "0", r.skipped ? "1" : "0",
                          format_number(r.seconds), r.detail});
      });
      if (!g.out.empty()) emit(g, csv_body(t));
      std::cerr << (rep.all_pass() ? "all checks passed" : "some checks failed") << " in " << rep.seconds
                << " s\n";
      if (rep.budget_exceeded) return kBudget;
      return rep.all_pass() ? kOk : kValidation;
    }
    log(Level::info, "done in " + elapsed());
    return kOk;
  } catch (const ConfigError& e) {
    log(Level::error, e.what());
    return kConfig;
  } catch (const CsvError& e) {
    log(Level::error, e.what());
    return kConfig;
  } catch (const std::invalid_argument& e) {
    log(Level::error, e.what());
    return kConfig;
  } catch (const std::exception& e) {
    log(Level::error, std::string("numerical failure: ") + e.what());
    return kNumerical;
  }
}
