#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hetsleep/analytic.hpp"
#include "hetsleep/csv.hpp"
#include "hetsleep/montecarlo.hpp"

namespace hetsleep {

enum class Engine { analytic, mc, both };

Engine engine_from_string(const std::string& name);
std::string to_string(Engine e);
std::string to_string(PolicyKind k);

struct LoadPmfRequest {
  int bs_tier_id = 1;
  int size = 0;  // rows; 0 uses the scenario DFT size
  std::optional<double> min_radius;
  bool with_mc = true;
  long realizations = 500;
};

/// Columns n, analytic_two_rc, analytic_zero, mc; the last row holds the
/// total-variation distance of each analytic column to the MC column.
CsvTable loadpmf_table(const Scenario& s, const LoadPmfRequest& req, const McConfig& mc);

/// Per-tier ratios (q) or thresholds (mu) of a metrics run.
struct PolicyRequest {
  PolicyKind kind = PolicyKind::strategic;
  std::vector<double> q;  // one per BS tier, or one for all
  std::vector<long> mu;   // strategic thresholds, one per BS tier
};

SleepPolicy analytic_policy(const PolicyRequest& req, const std::vector<LoadModel>& loads);
SleepPolicy simulated_policy(const PolicyRequest& req, const Scenario& s, const McConfig& mc);

/// Long format: engine, metric, value, user_tier, k_star, q, tau_db,
/// ci_halfwidth, trials.
CsvTable metrics_table(const Scenario& s, const PolicyRequest& req, const std::vector<double>& tau_db,
                       Engine engine, const McConfig& mc, const AnalyticConfig& cfg = {});

std::vector<SweepRow> analytic_sweep(const Scenario& s, const SweepSpec& spec,
                                     const AnalyticConfig& cfg = {});

CsvTable sweep_table(const Scenario& s, const SweepSpec& spec, Engine engine, const McConfig& mc,
                     const AnalyticConfig& cfg = {});

}  // namespace hetsleep
