#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetsleep/load.hpp"
#include "hetsleep/pointproc.hpp"
#include "hetsleep/scenario.hpp"

namespace hetsleep {

struct McConfig {
  long trials = 100000;
  std::uint64_t seed = 1;
  long batch = 256;  // trials per work unit
  unsigned threads = 0;  // 0: hardware concurrency
  double confidence = 0.95;
  std::optional<std::size_t> ue_tier;  // fixed typical-user tier index
  Kernel kernel = Kernel::cosine;
  long pilot_realizations = 200;  // for empirical strategic thresholds

  void validate() const;
};

struct McEstimate {
  double value = 0.0;
  double half_width = 0.0;
  long trials = 0;
};

/// Per-trial seed: SplitMix64 of (seed, index).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Global BS index: tiers concatenated in order.
struct BsRef {
  std::size_t tier = 0;
  std::size_t index = 0;
};

/// Nearest-BS lookup over all tiers jointly.
class BsLocator {
 public:
  BsLocator(const Region& region, const std::vector<std::vector<Point>>& bs);

  /// Global index of the nearest BS to p; ties go to the lower index.
  std::size_t nearest(const Point& p) const;
  std::size_t size() const { return pts_.size(); }
  BsRef ref(std::size_t g) const { return refs_[g]; }
  std::size_t global(std::size_t tier, std::size_t index) const { return offset_[tier] + index; }

  /// Grid cell holding p.
  std::size_t cell_of(const Point& p) const;
  /// Cells containing at least one point whose nearest BS may be one of
  /// targets (conservative).
  std::vector<char> cells_reaching(const std::vector<std::size_t>& targets) const;

 private:
  Region region_;
  std::vector<Point> pts_;
  std::vector<BsRef> refs_;
  std::vector<std::size_t> offset_;
  int cells_ = 1;
  double cell_ = 1.0;
  // Points sorted by cell: cell c owns [start_[c], start_[c + 1]).
  std::vector<std::uint32_t> start_;
  std::vector<double> bx_, by_;
  std::vector<std::uint32_t> bid_;
};

/// Users per BS (global index), every user at its nearest BS pre-sleep.
std::vector<long> cell_loads(const NetworkRealization& net);
std::vector<long> cell_loads(const NetworkRealization& net, const BsLocator& loc);
/// Same, counting only users in the flagged grid cells.
std::vector<long> cell_loads(const NetworkRealization& net, const BsLocator& loc,
                             const std::vector<char>& cell_mask);

/// Awake flags per BS (global index). u holds one uniform per BS.
std::vector<char> apply_sleep(const std::vector<long>& loads, const BsLocator& loc,
                              const SleepPolicy& policy, const std::vector<double>& u);
std::vector<char> apply_sleep(const std::vector<long>& loads, const BsLocator& loc,
                              const SleepPolicy& policy, Rng& rng);

/// One configuration evaluated on the common trials.
struct McCase {
  std::string label;
  SleepPolicy policy;
  std::optional<double> power_dbm;  // overrides every BS tier
  std::optional<int> antennas;      // overrides every BS tier
};

struct McCaseResult {
  std::vector<McEstimate> coverage;        // per tau
  std::vector<std::vector<McEstimate>> per_ue_tier;  // [tau][UE tier index]
  double awake_fraction = 0.0;             // over BSs in range of the typical user
};

struct McBank {
  std::vector<double> tau_db;
  std::vector<McCaseResult> cases;
  long trials = 0;
};

/// AAKCP by simulation for every case and tau on common random numbers.
McBank run_aakcp(const Scenario& s, const McConfig& cfg, const std::vector<McCase>& cases,
                 const std::vector<double>& tau_db);
McEstimate run_aakcp(const Scenario& s, const McConfig& cfg, const SleepPolicy& policy,
                     double tau_db);

/// Load histogram of one BS tier over cfg.pilot_realizations networks
/// (or the given count).
LoadPmf empirical_load_pmf(const Scenario& s, std::size_t bs_tier, const McConfig& cfg,
                           std::optional<long> realizations = std::nullopt, int size = 0);
std::vector<LoadPmf> empirical_load_pmfs(const Scenario& s, const McConfig& cfg,
                                         std::optional<long> realizations = std::nullopt);

/// Strategic policy whose thresholds come from the empirical load PMFs.
SleepPolicy empirical_strategic_policy(const std::vector<LoadPmf>& pmfs,
                                       const std::vector<double>& q);

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

enum class SweepParam { tau_db, q, power_dbm, antennas, epsilon };

SweepParam sweep_param_from_string(const std::string& name);
std::string to_string(SweepParam p);

/// Sleeping strategy of a sweep curve. Strategic uses q as the target
/// ratio, random uses it as the Bernoulli probability, none ignores it.
struct SweepCurve {
  PolicyKind kind = PolicyKind::strategic;
  double q = 1.0;
  std::string label() const;
};

struct SweepSpec {
  SweepParam param = SweepParam::tau_db;
  std::vector<double> values;
  std::vector<SweepCurve> curves;
  double tau_db = 5.0;  // fixed when param != tau_db
  double q = 1.0;       // fixed ratio when param == epsilon with no curves
};

struct SweepRow {
  std::string curve;  // for epsilon sweeps: one curve per (epsilon, kind), x = q
  double x = 0.0;
  double tau_db = 0.0;
  std::vector<double> q;  // achieved ratio per BS tier
  McEstimate aakcp;
  double ase = 0.0;
  double power_net = 0.0;
  double ee = 0.0;
  double ee_half_width = 0.0;
  bool argmax = false;  // best EE along its curve
};

/// Simulated sweep; EE uses the exact power model with the policy ratios.
std::vector<SweepRow> run_sweep(const Scenario& s, const McConfig& cfg, const SweepSpec& spec);

/// Applies a sweep coordinate to a scenario copy (power, antennas,
/// P_sleep = epsilon P_stat).
Scenario apply_sweep_value(const Scenario& s, SweepParam p, double v);

/// Marks the EE maximum of every curve.
void mark_argmax(std::vector<SweepRow>& rows);

}  // namespace hetsleep
