#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hetsleep/quadrature.hpp"
#include "hetsleep/scenario.hpp"

namespace hetsleep {

/// Shape parameter of the Nakagami law of the equivalent-disk cell radius.
inline constexpr double kCellRadiusShape = 3.575;

/// The DFT grid is too small for the load distribution (probability mass
/// wraps around).
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fraction of a uniform disk of radius r_m (center at distance w from the
/// origin) that falls inside b(0, r): lens area / (pi r_m^2).
double xi(double r, double w, double r_m);

double exclusion_distance(const LoadModelConfig& cfg, double r_c);

/// PGF of the number of points of a category-1/2 cluster tier inside
/// b(0, r_c), with cluster centers excluded from b(0, chi).
std::complex<double> pgf_cat12(std::complex<double> theta, double r_c, const UeTier& tier,
                               double chi);
/// Tier whose cluster is centered on the cell's own BS.
std::complex<double> pgf_cat2_linked(std::complex<double> theta, double r_c, double mean_size,
                                     double r_m);
std::complex<double> pgf_cat3(std::complex<double> theta, double r_c, double intensity);

/// Omega of the cell-radius law, 1 / (pi lambda_tot).
double cell_radius_omega(const Scenario& s);
double cell_radius_pdf(const Scenario& s, double r);
double cell_radius_ccdf(const Scenario& s, double r);

struct LoadPmf {
  int tier = 0;
  std::optional<double> min_radius;
  std::vector<double> p;
  double mass = 1.0;  // sum before clamping and renormalization

  double mean() const;
  double tail(long t) const;  // P(load >= t)
};

/// Per-tier activity rule: awake iff load >= mu; at load == mu - 1 the BS
/// stays awake with probability boundary_prob.
struct SleepRule {
  static constexpr long kNever = std::numeric_limits<long>::max();

  long mu = 0;
  double boundary_prob = 0.0;
  double target_q = 1.0;
  double achieved_q = 1.0;

  double awake_given_load(long load) const;
  bool operator==(const SleepRule&) const = default;
};

/// Threshold hitting ratio q on the given PMF. With exact set, boundary
/// randomization makes the achieved ratio equal q; otherwise mu is the
/// largest threshold whose tail still reaches q and achieved_q reports it.
SleepRule threshold_from_ratio(const LoadPmf& pmf, double q, bool exact = true);

/// Fixed threshold; achieved_q computed from pmf.
SleepRule rule_from_threshold(const LoadPmf& pmf, long mu);

enum class PolicyKind { strategic, random, none };

/// Activity of every BS tier. Strategic rules come from the load PMFs;
/// random sleeping uses target_q as an independent awake probability.
struct SleepPolicy {
  PolicyKind kind = PolicyKind::none;
  std::vector<SleepRule> rules;  // per BS tier index

  double q(std::size_t k) const;
  std::vector<double> ratios() const;
};

/// Load statistics of one BS tier. Cell radius integration uses a composite
/// Gauss-Legendre rule with breakpoints at every cluster radius; the load
/// distribution is resolved at each radius node so that Palm-conditioned
/// quantities (cell radius at least r) are cheap.
class LoadModel {
 public:
  LoadModel(const Scenario& s, std::size_t bs_tier);

  std::size_t bs_tier() const { return k_; }

  /// G_S(theta), optionally over cells of radius >= min_radius.
  std::complex<double> pgf(std::complex<double> theta,
                           std::optional<double> min_radius = std::nullopt) const;

  /// Expected load (optionally conditioned as above) from the PGF derivative.
  double mean_load(std::optional<double> min_radius = std::nullopt) const;

  const LoadPmf& pmf() const;
  LoadPmf conditional_pmf(double min_radius) const;

  /// Probability that the BS whose cell radius is at least r is awake.
  double awake_prob(const SleepRule& rule, double r) const;

  double radius_cutoff() const { return r_hi_; }

 private:
  struct TierTerm {
    enum Kind { uniform, linked, cluster } kind;
    double scale = 0.0;  // lambda (uniform), mean size (linked), 2 pi lambda_p (cluster)
    double mean_size = 0.0;
    // cluster: sum_j weight_j (1 - exp(-mean (1 - theta) xi_j))
    std::vector<double> weight;
    std::vector<double> xi;
    double lin = 0.0;  // xi(r_c, 0) for linked, pi r_c^2 for uniform
  };
  struct Node {
    double r = 0.0;
    double wf = 0.0;  // quadrature weight times radius density
    std::vector<TierTerm> terms;
  };
  struct Panel {
    double lo = 0.0, hi = 0.0;
    std::size_t first = 0, count = 0;
  };

  std::complex<double> node_pgf(const Node& n, std::complex<double> theta) const;
  double node_mean(const Node& n) const;
  void build_node(Node& n) const;
  void resolve();

  // Coefficients c_i with sum_i c_i g(r_i) ~ int_r^inf g f dr_c.
  std::vector<std::pair<std::size_t, double>> tail_coefficients(double r) const;

  Scenario s_;
  std::size_t k_;
  double omega_ = 0.0;
  double r_hi_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<Panel> panels_;
  QuadNodes ref_;          // per-panel rule on [-1, 1]
  std::vector<double> bary_;  // barycentric weights on ref_ nodes

  std::vector<std::vector<double>> node_pmf_;
  std::vector<std::vector<double>> node_tail_;
  LoadPmf pmf_;
};

/// One load model per BS tier of the scenario.
std::vector<LoadModel> build_load_models(const Scenario& s);

/// Strategic policy hitting q[k] on every tier (exact boundary randomization
/// unless exact is false).
SleepPolicy strategic_policy(const std::vector<LoadModel>& loads, const std::vector<double>& q,
                             bool exact = true);
/// Strategic policy from explicit thresholds.
SleepPolicy threshold_policy(const std::vector<LoadModel>& loads, const std::vector<long>& mu);
SleepPolicy random_policy(const std::vector<double>& q);
SleepPolicy no_sleep_policy(std::size_t tiers);

}  // namespace hetsleep
