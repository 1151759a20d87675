#pragma once

#include <atomic>
#include <vector>

#include "hetsleep/load.hpp"
#include "hetsleep/scenario.hpp"

namespace hetsleep {

/// Laplace-transform evaluation route.
///   closed_form: hypergeometric closed forms, radial quadrature when a
///                series argument is out of range.
///   quadrature:  radial quadrature of the fading/beam average.
///   cross_check: both; the largest relative gap is recorded.
enum class LtMode { closed_form, quadrature, cross_check };

struct AnalyticConfig {
  double outer_rel_tol = 1e-6;
  double inner_rel_tol = 1e-6;
  double lt_rel_tol = 1e-11;
  double arg_threshold = 0.95;
  LtMode lt_mode = LtMode::closed_form;
  double cross_check_tol = 1e-6;
};

/// Largest relative closed-form/quadrature gap seen in cross_check mode
/// (process wide, reset by the caller).
std::atomic<double>& cross_check_discrepancy();

/// Serving-tier selector: a BS tier index, or the coupled cluster-center BS.
inline constexpr int kCoupled = -1;

/// Interference environment of a typical user.
struct UserView {
  std::vector<double> q;  // active ratio per BS tier index
  bool has_coupled = false;
  std::size_t coupled_tier = 0;  // BS tier index of the cluster-center BS
  double r_m0 = 0.0;
  double q0 = 1.0;

  static UserView for_ue_tier(const Scenario& s, std::size_t ue_tier, const std::vector<double>& q);
};

// Nearest-BS distance laws with an exclusion radius kappa.
double distance_pdf(double intensity, double r, double kappa);
double distance_ccdf(double intensity, double r, double kappa);
double coupled_distance_pdf(double r, double kappa, double r_m0);
double coupled_distance_ccdf(double r, double kappa, double r_m0);

/// Probability that the nearest BS (pre-sleep) is of tier k_star given its
/// distance r.
double p_closest(int k_star, double r, const Scenario& s, const UserView& u);

/// Interference exponent of BS tier k (the tier's transform is exp(-zeta)),
/// and its l-th derivative in s.
double zeta_k(double s_val, double r_j, std::size_t k, double q_k, const Scenario& s,
              const AnalyticConfig& cfg = {}, int l = 0);

/// Closed form only; throws SeriesOutOfRange when a series argument is out
/// of range.
double zeta_k_closed(double s_val, double r_j, std::size_t k, double q_k, const Scenario& s,
                     const AnalyticConfig& cfg = {}, int l = 0);

/// Reference value of zeta_k^(l) by two-dimensional quadrature over distance
/// and beam angle with exact Gamma-fading averages.
double zeta_k_oracle(double s_val, double r_j, std::size_t k, double q_k, const Scenario& s,
                     int l = 0);

/// Transform of the coupled BS interference (and its l-th derivative) when
/// the user is served by another BS at r_j. Returns 1 (0 for l > 0) when
/// there is no coupled BS.
double lt_coupled(double s_val, double r_j, const Scenario& s, const UserView& u,
                  const AnalyticConfig& cfg = {}, int l = 0);

/// Same through the hypergeometric closed form only.
double lt_coupled_closed(double s_val, double r_j, const Scenario& s, const UserView& u,
                         const AnalyticConfig& cfg = {}, int l = 0);

/// Same by two-dimensional quadrature (distance and beam angle).
double lt_coupled_oracle(double s_val, double r_j, const Scenario& s, const UserView& u, int l = 0);

/// l-th derivative of exp(zeta_exp), zeta_exp = -s sigma^2 - sum_k zeta_k.
/// Returns the derivatives 0..l.
std::vector<double> lt_exp_derivatives(int l, double s_val, double r_j, const Scenario& s,
                                       const UserView& u, const AnalyticConfig& cfg = {});
double zeta_exp(double s_val, double r_j, const Scenario& s, const UserView& u,
                const AnalyticConfig& cfg = {}, int l = 0);

/// Gain A_j = beta M_j P_j of a serving tier.
double serving_gain(int j, const Scenario& s, const UserView& u);

/// Success probability without coupled-BS interference: norm-1 of the
/// exponential of the lower-triangular Toeplitz matrix of c_l.
double p_suc_toeplitz(double tau, double r_j, int j, const Scenario& s, const UserView& u,
                  const AnalyticConfig& cfg = {});

/// Success probability with coupled-BS interference (Leibniz expansion).
double p_suc_leibniz(double tau, double r_j, int j, const Scenario& s, const UserView& u,
                  const AnalyticConfig& cfg = {});

/// Chooses p_suc_toeplitz or p_suc_leibniz from whether the coupled BS may interfere.
double p_suc(double tau, double r_j, int j, bool coupled_interferes, const Scenario& s,
             const UserView& u, const AnalyticConfig& cfg = {});

/// Rayleigh fading, no blockage (r_max -> infinity). Uses the square-root
/// forms when alpha == 4 unless force_general is set.
double p_suc_asymptotic(double tau, double r_j, int j, const Scenario& s, const UserView& u,
                        bool force_general = false);

/// Probability of being served by serving tier j given the closest awake
/// BS of j is at r_c and the nearest BS (tier k_star at r_kstar) sleeps.
double p_conn_subtier(int j, double r_c, int k_star, double r_kstar, const Scenario& s,
                      const UserView& u);

/// Coverage when the nearest BS (tier k_star at r_kstar) sleeps.
double p_cov_sleeping(double tau, int k_star, double r_kstar, const Scenario& s, const UserView& u,
                      const AnalyticConfig& cfg = {});

struct UeTierMetric {
  int ue_tier = 0;
  double aakcp = 0.0;
  double association_mass = 0.0;  // sum over k_star of int p_closest f dr
  std::vector<double> by_kstar;   // BS tiers in order, then the coupled BS if any
};

struct MetricReport {
  double tau_db = 0.0;
  double aakcp = 0.0;
  double ase = 0.0;
  double power_net = 0.0;
  double ee = 0.0;
  std::vector<double> q;  // achieved ratio per BS tier
  std::vector<UeTierMetric> per_ue_tier;
};

/// Awake probability of the nearest BS of tier k at distance r.
double nearest_awake_prob(std::size_t k, double r, const SleepPolicy& policy,
                          const std::vector<LoadModel>& loads);

double aakcp_ue_tier(double tau, std::size_t ue_tier, const Scenario& s, const SleepPolicy& policy,
                     const std::vector<LoadModel>& loads, const AnalyticConfig& cfg = {},
                     UeTierMetric* detail = nullptr);

MetricReport aakcp(double tau_db, const Scenario& s, const SleepPolicy& policy,
                   const std::vector<LoadModel>& loads, const AnalyticConfig& cfg = {});

/// Average consumption of one BS of tier k with active ratio q.
double bs_power(const Scenario& s, std::size_t k, double q);
double power_net(const Scenario& s, const std::vector<double>& q);
double area_spectral_efficiency(double aakcp, double tau_linear, const Scenario& s);
double energy_efficiency(double ase, double p_net);

}  // namespace hetsleep
