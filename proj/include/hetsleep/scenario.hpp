#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hetsleep {

/// Invalid or inconsistent configuration. The message names the offending
/// field (JSON path style, e.g. "bs_tiers[1].antennas").
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BsKind { base, hotspot };
enum class WrapMode { toroidal, guard };
enum class Kernel { cosine, actual };
enum class ChiMode { zero, two_rc, fixed };

struct BsTier {
  int id = 1;
  BsKind kind = BsKind::base;
  double intensity = 1e-4;  // per m^2
  double tx_power_dbm = 43.0;
  int antennas = 64;
  double p_stat_w = 260.0;
  double p_sleep_w = 75.0;

  double tx_power_w() const;
  bool operator==(const BsTier&) const = default;
};

struct UeTier {
  int id = 1;
  int category = 3;
  // categories 1 and 2
  double parent_intensity = 0.0;  // per m^2; category 2 copies the coupled BS tier
  double mean_cluster_size = 0.0;
  double cluster_radius = 0.0;  // m
  int coupled_bs_tier = 0;      // category 2 only (BS tier id)
  // category 3
  double intensity = 0.0;  // per m^2

  /// Users per m^2.
  double density() const;
  bool operator==(const UeTier&) const = default;
};

struct Window {
  double side_m = 0.0;  // 0 selects max(2 R_max, 20 / sqrt(total BS density))
  WrapMode wrap = WrapMode::toroidal;
  double guard_margin_m = 0.0;
  bool operator==(const Window&) const = default;
};

struct ChannelParams {
  double beta = 1.0;
  double alpha = 4.0;
  double m = 1.0;
  double noise_power = 3e-2;
  double d_over_wavelength = 0.5;
  Kernel kernel = Kernel::cosine;
  bool operator==(const ChannelParams&) const = default;
};

struct PowerModel {
  double p_a_w = 1.0;
  double delta_p = 4.0;
  bool operator==(const PowerModel&) const = default;
};

struct LoadModelConfig {
  ChiMode chi_mode = ChiMode::two_rc;
  double chi_m = 0.0;  // used by ChiMode::fixed
  int dft_size = 512;
  double quad_rel_tol = 1e-8;
  double radius_tail = 1e-10;
  bool count_typical_in_load = false;
  bool operator==(const LoadModelConfig&) const = default;
};

struct Scenario {
  std::vector<BsTier> bs_tiers;
  std::vector<UeTier> ue_tiers;
  Window window;
  ChannelParams channel;
  PowerModel power;
  LoadModelConfig load;
  double r_min = 1.0;
  double r_max = 400.0;
  double tau_db = 5.0;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  double bs_density_total() const;
  double ue_density_total() const;
  double window_side() const;

  /// Index into bs_tiers for a tier id; throws ConfigError listing valid ids.
  std::size_t bs_index(int id) const;
  std::size_t ue_index(int id) const;

  /// A_k = beta * M_k * P_k for BS tier index k.
  double gain_a(std::size_t k) const;

  bool operator==(const Scenario&) const = default;
};

/// dBm to watts.
double dbm_to_w(double dbm);
double db_to_linear(double db);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

/// Reads and validates a scenario file.
Scenario load_scenario_file(const std::string& path);

/// The two-tier, three-user-tier reference setup (hotspot tier coupled to a
/// clustered user tier, one independent clustered tier, one uniform tier).
Scenario table2_scenario();

}  // namespace hetsleep
