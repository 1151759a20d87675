#include "hetsleep/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "hetsleep/channel.hpp"
#include "hetsleep/quadrature.hpp"
#include "hetsleep/specfun.hpp"

namespace hetsleep {

namespace {

constexpr double kPi = std::numbers::pi;

int integer_m(const Scenario& s) {
  const double m = s.channel.m;
  if (std::nearbyint(m) != m || m < 1.0)
    throw DomainError("success probability: Nakagami m must be a positive integer");
  return static_cast<int>(m);
}

double pochhammer(double a, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= a + i;
  return p;
}

double factorial(int n) { return pochhammer(1.0, n); }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// 2F1(a, b; c; x) - 1 without cancellation near x = 0.
double f21_minus_one(double a, double b, double c, double x) {
  if (std::abs(x) >= 0.5) return gauss_2f1(a, b, c, x) - 1.0;
  double term = 1.0, sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

struct Beam {
  double a = 0.0;  // beta M P
  int antennas = 1;
};

// I^(l)(s) for I(s) = int_lo^hi (1 - E_g[exp(-s beta P g t^-alpha)]) t dt,
// hypergeometric closed form.
double radial_closed(int l, double s_val, const Beam& b, double lo, double hi, const Scenario& sc,
                     const AnalyticConfig& cfg) {
  const double alpha = sc.channel.alpha;
  const double m = sc.channel.m;
  const double nu = 2.0 / alpha;
  const SeriesControl ctl;
  const double x_lo = -s_val * b.a * std::pow(lo, -alpha) / m;
  const double x_hi = -s_val * b.a * std::pow(hi, -alpha) / m;
  if (l == 0) {
    const double j_lo = cal_j_minus_one(0, nu, m, x_lo, ctl, cfg.arg_threshold);
    const double j_hi = cal_j_minus_one(0, nu, m, x_hi, ctl, cfg.arg_threshold);
    return (lo * lo * j_lo - hi * hi * j_hi) / b.antennas;
  }
  const double d_l = std::tgamma(l + 0.5) / std::sqrt(kPi) * (2.0 / (2.0 - alpha * l)) *
                     pochhammer(m, l) / factorial(l);
  const double j_lo = cal_j(l, nu, m, x_lo, ctl, cfg.arg_threshold);
  const double j_hi = cal_j(l, nu, m, x_hi, ctl, cfg.arg_threshold);
  return d_l * std::pow(-b.a / m, l) *
         (std::pow(lo, 2.0 - alpha * l) * j_lo - std::pow(hi, 2.0 - alpha * l) * j_hi) / b.antennas;
}

// Same by radial quadrature; the fading and beam-angle average is
// 1 - (2/M) (1 - 2F1(m, 1/2; 1; -s a)), a = A t^-alpha / m.
double radial_quad(int l, double s_val, const Beam& b, double lo, double hi, const Scenario& sc,
                   double rel_tol) {
  const double alpha = sc.channel.alpha;
  const double m = sc.channel.m;
  const double coef = pochhammer(m, l) * pochhammer(0.5, l) / factorial(l);
  auto f = [&](double t) {
    const double a = b.a * std::pow(t, -alpha) / m;
    if (l == 0) return -t * (2.0 / b.antennas) * f21_minus_one(m, 0.5, 1.0, -s_val * a);
    const double d = coef * std::pow(-a, l) * gauss_2f1(m + l, 0.5 + l, 1.0 + l, -s_val * a);
    return -t * (2.0 / b.antennas) * d;
  };
  return integrate(f, lo, hi, rel_tol, 1e-300);
}

// Ground truth: quadrature over distance and beam angle with exact Gamma
// moment-generating derivatives.
double radial_oracle(int l, double s_val, const Beam& b, double lo, double hi, const Scenario& sc) {
  const double alpha = sc.channel.alpha;
  const double m = sc.channel.m;
  const int M = b.antennas;
  const double ml = pochhammer(m, l);
  auto inner = [&](double t) {
    auto g = [&](double theta) {
      const double c = b.a * kernel_cosine(0.5 * theta, M) * std::pow(t, -alpha) / m;
      if (l == 0) return -std::expm1(-m * std::log1p(s_val * c));
      return -std::pow(-c, l) * ml * std::pow(1.0 + s_val * c, -m - l);
    };
    // theta uniform on [-1, 1]; only |theta| <= 2/M carries gain. The
    // integrand is even, so (1/2) int_{-2/M}^{2/M} = int_0^{2/M}.
    return t * integrate(g, 0.0, 2.0 / M, 1e-10, 1e-300);
  };
  return integrate(inner, lo, hi, 1e-9, 1e-300);
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

void record_gap(double gap) {
  auto& g = cross_check_discrepancy();
  double cur = g.load();
  while (gap > cur && !g.compare_exchange_weak(cur, gap)) {
  }
}

double radial(int l, double s_val, const Beam& b, double lo, double hi, const Scenario& sc,
              const AnalyticConfig& cfg, LtMode mode) {
  if (lo >= hi) return 0.0;
  switch (mode) {
    case LtMode::quadrature: return radial_quad(l, s_val, b, lo, hi, sc, cfg.lt_rel_tol);
    case LtMode::closed_form:
      try {
        return radial_closed(l, s_val, b, lo, hi, sc, cfg);
      } catch (const SeriesOutOfRange&) {
      } catch (const NonConvergence&) {
      }
      return radial_quad(l, s_val, b, lo, hi, sc, cfg.lt_rel_tol);
    case LtMode::cross_check: {
      const double q = radial_quad(l, s_val, b, lo, hi, sc, cfg.lt_rel_tol);
      try {
        const double c = radial_closed(l, s_val, b, lo, hi, sc, cfg);
        record_gap(relative_gap(c, q));
      } catch (const SeriesOutOfRange&) {
      } catch (const NonConvergence&) {
      }
      return q;
    }
  }
  return 0.0;
}

Beam beam_of(const Scenario& s, std::size_t k) {
  return {s.gain_a(k), s.bs_tiers[k].antennas};
}

}  // namespace

std::atomic<double>& cross_check_discrepancy() {
  static std::atomic<double> gap{0.0};
  return gap;
}

UserView UserView::for_ue_tier(const Scenario& s, std::size_t ue_tier, const std::vector<double>& q) {
  UserView u;
  u.q = q;
  const auto& t = s.ue_tiers.at(ue_tier);
  if (t.category == 2) {
    u.has_coupled = true;
    u.coupled_tier = s.bs_index(t.coupled_bs_tier);
    u.r_m0 = t.cluster_radius;
    u.q0 = q.at(u.coupled_tier);
  }
  return u;
}

double distance_pdf(double intensity, double r, double kappa) {
  if (r < kappa) return 0.0;
  return 2.0 * kPi * intensity * r * std::exp(-intensity * kPi * (r * r - kappa * kappa));
}

double distance_ccdf(double intensity, double r, double kappa) {
  if (r <= kappa) return 1.0;
  return std::exp(-intensity * kPi * (r * r - kappa * kappa));
}

double coupled_distance_pdf(double r, double kappa, double r_m0) {
  if (r < kappa || r > r_m0 || kappa >= r_m0) return 0.0;
  return 2.0 * r / (r_m0 * r_m0 - kappa * kappa);
}

double coupled_distance_ccdf(double r, double kappa, double r_m0) {
  if (kappa >= r_m0) return 0.0;
  if (r <= kappa) return 1.0;
  if (r >= r_m0) return 0.0;
  return (r_m0 * r_m0 - r * r) / (r_m0 * r_m0 - kappa * kappa);
}

double p_closest(int k_star, double r, const Scenario& s, const UserView& u) {
  double p = 1.0;
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    if (static_cast<int>(k) == k_star) continue;
    p *= distance_ccdf(s.bs_tiers[k].intensity, r, s.r_min);
  }
  if (u.has_coupled && k_star != kCoupled) p *= coupled_distance_ccdf(r, s.r_min, u.r_m0);
  return p;
}

double zeta_k(double s_val, double r_j, std::size_t k, double q_k, const Scenario& s,
              const AnalyticConfig& cfg, int l) {
  if (q_k == 0.0 || r_j >= s.r_max) return 0.0;
  const double scale = 2.0 * kPi * q_k * s.bs_tiers.at(k).intensity;
  return scale * radial(l, s_val, beam_of(s, k), r_j, s.r_max, s, cfg, cfg.lt_mode);
}

double zeta_k_closed(double s_val, double r_j, std::size_t k, double q_k, const Scenario& s,
                     const AnalyticConfig& cfg, int l) {
  if (q_k == 0.0 || r_j >= s.r_max) return 0.0;
  const double scale = 2.0 * kPi * q_k * s.bs_tiers.at(k).intensity;
  return scale * radial_closed(l, s_val, beam_of(s, k), r_j, s.r_max, s, cfg);
}

double zeta_k_oracle(double s_val, double r_j, std::size_t k, double q_k, const Scenario& s, int l) {
  if (q_k == 0.0 || r_j >= s.r_max) return 0.0;
  const double scale = 2.0 * kPi * q_k * s.bs_tiers.at(k).intensity;
  return scale * radial_oracle(l, s_val, beam_of(s, k), r_j, s.r_max, s);
}

namespace {

double coupled_common(double r_j, const Scenario& s, const UserView& u, int l,
                      const std::function<double(const Beam&, double, double)>& radial_fn) {
  const double unit = l == 0 ? 1.0 : 0.0;
  if (!u.has_coupled || u.q0 == 0.0) return unit;
  const double top = std::min(u.r_m0, s.r_max);
  if (r_j >= top) return unit;
  const double norm = u.r_m0 * u.r_m0 - r_j * r_j;
  const double i_l = radial_fn(beam_of(s, u.coupled_tier), r_j, top);
  return unit - u.q0 * (2.0 / norm) * i_l;
}

}  // namespace

double lt_coupled(double s_val, double r_j, const Scenario& s, const UserView& u,
                  const AnalyticConfig& cfg, int l) {
  const LtMode mode = cfg.lt_mode == LtMode::closed_form ? LtMode::quadrature : cfg.lt_mode;
  return coupled_common(r_j, s, u, l, [&](const Beam& b, double lo, double hi) {
    return radial(l, s_val, b, lo, hi, s, cfg, mode);
  });
}

double lt_coupled_closed(double s_val, double r_j, const Scenario& s, const UserView& u,
                         const AnalyticConfig& cfg, int l) {
  return coupled_common(r_j, s, u, l, [&](const Beam& b, double lo, double hi) {
    return radial_closed(l, s_val, b, lo, hi, s, cfg);
  });
}

double lt_coupled_oracle(double s_val, double r_j, const Scenario& s, const UserView& u, int l) {
  return coupled_common(r_j, s, u, l, [&](const Beam& b, double lo, double hi) {
    return radial_oracle(l, s_val, b, lo, hi, s);
  });
}

double zeta_exp(double s_val, double r_j, const Scenario& s, const UserView& u,
                const AnalyticConfig& cfg, int l) {
  double v = 0.0;
  if (l == 0) v -= s_val * s.channel.noise_power;
  if (l == 1) v -= s.channel.noise_power;
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) v -= zeta_k(s_val, r_j, k, u.q.at(k), s, cfg, l);
  return v;
}

std::vector<double> lt_exp_derivatives(int l, double s_val, double r_j, const Scenario& s,
                                       const UserView& u, const AnalyticConfig& cfg) {
  std::vector<double> z(static_cast<std::size_t>(l) + 1);
  for (int i = 0; i <= l; ++i) z[static_cast<std::size_t>(i)] = zeta_exp(s_val, r_j, s, u, cfg, i);
  std::vector<double> d(static_cast<std::size_t>(l) + 1, 0.0);
  d[0] = std::exp(z[0]);
  for (int n = 1; n <= l; ++n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += binomial(n - 1, i) * z[static_cast<std::size_t>(n - i)] * d[static_cast<std::size_t>(i)];
    d[static_cast<std::size_t>(n)] = acc;
  }
  return d;
}

double serving_gain(int j, const Scenario& s, const UserView& u) {
  if (j == kCoupled) {
    if (!u.has_coupled) throw DomainError("serving_gain: no coupled BS for this user");
    return s.gain_a(u.coupled_tier);
  }
  return s.gain_a(static_cast<std::size_t>(j));
}

double p_suc_toeplitz(double tau, double r_j, int j, const Scenario& s, const UserView& u,
                  const AnalyticConfig& cfg) {
  if (r_j > s.r_max) return 0.0;
  const int m = integer_m(s);
  const double s_val = tau * m * std::pow(r_j, s.channel.alpha) / serving_gain(j, s, u);
  std::vector<double> c(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l)
    c[static_cast<std::size_t>(l)] = std::pow(-s_val, l) / factorial(l) * zeta_exp(s_val, r_j, s, u, cfg, l);
  return std::clamp(toeplitz_lower_expm_norm1(c), 0.0, 1.0);
}

double p_suc_leibniz(double tau, double r_j, int j, const Scenario& s, const UserView& u,
                  const AnalyticConfig& cfg) {
  if (r_j > s.r_max) return 0.0;
  const int m = integer_m(s);
  const double s_val = tau * m * std::pow(r_j, s.channel.alpha) / serving_gain(j, s, u);
  const auto le = lt_exp_derivatives(m - 1, s_val, r_j, s, u, cfg);
  std::vector<double> lc(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) lc[static_cast<std::size_t>(l)] = lt_coupled(s_val, r_j, s, u, cfg, l);
  double total = 0.0;
  for (int l = 0; l < m; ++l) {
    double inner = 0.0;
    for (int L = 0; L <= l; ++L)
      inner += binomial(l, L) * lc[static_cast<std::size_t>(l - L)] * le[static_cast<std::size_t>(L)];
    total += std::pow(-s_val, l) / factorial(l) * inner;
  }
  return std::clamp(total, 0.0, 1.0);
}

double p_suc(double tau, double r_j, int j, bool coupled_interferes, const Scenario& s,
             const UserView& u, const AnalyticConfig& cfg) {
  if (coupled_interferes && u.has_coupled && j != kCoupled) return p_suc_leibniz(tau, r_j, j, s, u, cfg);
  return p_suc_toeplitz(tau, r_j, j, s, u, cfg);
}

double p_suc_asymptotic(double tau, double r_j, int j, const Scenario& s, const UserView& u,
                        bool force_general) {
  if (s.channel.m != 1.0) throw DomainError("p_suc_asymptotic: requires Rayleigh fading (m = 1)");
  const double alpha = s.channel.alpha;
  const double nu = 2.0 / alpha;
  const bool sqrt_form = alpha == 4.0 && !force_general;
  auto F = [&](double x) { return sqrt_form ? std::sqrt(1.0 - x) : gauss_2f1(0.5, -nu, 1.0 - nu, x); };
  const double a_j = serving_gain(j, s, u);
  double eta = -tau * std::pow(r_j, alpha) * s.channel.noise_power / a_j;
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    const double a_k = s.gain_a(k);
    eta -= 2.0 * kPi * u.q.at(k) * s.bs_tiers[k].intensity / s.bs_tiers[k].antennas * r_j * r_j *
           (F(-tau * a_k / a_j) - 1.0);
  }
  double l0 = 1.0;
  if (u.has_coupled && j != kCoupled && u.r_m0 > r_j) {
    const double a0 = s.gain_a(u.coupled_tier);
    const double m0 = s.bs_tiers[u.coupled_tier].antennas;
    const double rm2 = u.r_m0 * u.r_m0;
    const double rj2 = r_j * r_j;
    l0 = (1.0 - u.q0) + u.q0 * (1.0 - 2.0 / m0) +
         2.0 * u.q0 / (m0 * (rm2 - rj2)) *
             (rm2 * F(-tau * a0 * std::pow(r_j / u.r_m0, alpha) / a_j) - rj2 * F(-tau * a0 / a_j));
  }
  return l0 * std::exp(eta);
}

double p_conn_subtier(int j, double r_c, int k_star, double r_kstar, const Scenario& s,
                      const UserView& u) {
  double f0 = 1.0;
  if (u.has_coupled) {
    if (k_star == kCoupled)
      f0 = j == kCoupled ? 0.0 : 1.0;
    else if (j == kCoupled)
      f0 = r_c <= u.r_m0 ? u.q0 : 0.0;
    else
      f0 = (1.0 - u.q0) + u.q0 * coupled_distance_ccdf(r_c, r_kstar, u.r_m0);
  }
  double p = f0;
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    if (static_cast<int>(k) == j) continue;
    p *= distance_ccdf(u.q.at(k) * s.bs_tiers[k].intensity, r_c, r_kstar);
  }
  return p;
}

double p_cov_sleeping(double tau, int k_star, double r_kstar, const Scenario& s, const UserView& u,
                      const AnalyticConfig& cfg) {
  if (r_kstar >= s.r_max) return 0.0;
  const bool coupled_may_interfere = k_star != kCoupled;
  std::vector<double> breaks;
  if (u.has_coupled) breaks.push_back(u.r_m0);
  double total = 0.0;
  for (std::size_t j = 0; j < s.bs_tiers.size(); ++j) {
    const double lam = u.q.at(j) * s.bs_tiers[j].intensity;
    if (lam == 0.0) continue;
    const int jj = static_cast<int>(j);
    auto f = [&](double rc) {
      const double dens = distance_pdf(lam, rc, r_kstar);
      if (dens == 0.0) return 0.0;
      const double conn = p_conn_subtier(jj, rc, k_star, r_kstar, s, u);
      if (conn == 0.0) return 0.0;
      return conn * dens * p_suc(tau, rc, jj, coupled_may_interfere, s, u, cfg);
    };
    total += integrate_split(f, r_kstar, s.r_max, breaks, cfg.inner_rel_tol, 1e-12);
  }
  if (u.has_coupled && k_star != kCoupled && r_kstar < u.r_m0 && u.q0 > 0.0) {
    auto f = [&](double rc) {
      return p_conn_subtier(kCoupled, rc, k_star, r_kstar, s, u) *
             coupled_distance_pdf(rc, r_kstar, u.r_m0) * p_suc(tau, rc, kCoupled, false, s, u, cfg);
    };
    total += integrate(f, r_kstar, std::min(s.r_max, u.r_m0), cfg.inner_rel_tol, 1e-12);
  }
  return std::clamp(total, 0.0, 1.0);
}

double nearest_awake_prob(std::size_t k, double r, const SleepPolicy& policy,
                          const std::vector<LoadModel>& loads) {
  switch (policy.kind) {
    case PolicyKind::none: return 1.0;
    case PolicyKind::random: return policy.rules.at(k).achieved_q;
    case PolicyKind::strategic: return loads.at(k).awake_prob(policy.rules.at(k), r);
  }
  return 1.0;
}

double aakcp_ue_tier(double tau, std::size_t ue_tier, const Scenario& s, const SleepPolicy& policy,
                     const std::vector<LoadModel>& loads, const AnalyticConfig& cfg,
                     UeTierMetric* detail) {
  const UserView u = UserView::for_ue_tier(s, ue_tier, policy.ratios());
  std::vector<double> breaks;
  if (u.has_coupled) breaks.push_back(u.r_m0);

  auto branch = [&](int k_star, std::size_t load_tier, double r) {
    const double a = nearest_awake_prob(load_tier, r, policy, loads);
    double v = 0.0;
    if (a > 0.0) v += a * p_suc(tau, r, k_star, k_star != kCoupled, s, u, cfg);
    if (a < 1.0) v += (1.0 - a) * p_cov_sleeping(tau, k_star, r, s, u, cfg);
    return v;
  };

  double total = 0.0;
  double mass = 0.0;
  std::vector<double> parts;
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    const int ks = static_cast<int>(k);
    const double lam = s.bs_tiers[k].intensity;
    auto weight = [&](double r) { return p_closest(ks, r, s, u) * distance_pdf(lam, r, s.r_min); };
    auto f = [&](double r) {
      const double w = weight(r);
      return w == 0.0 ? 0.0 : w * branch(ks, k, r);
    };
    const double part = integrate_split(f, s.r_min, s.r_max, breaks, cfg.outer_rel_tol, 1e-12);
    mass += integrate_split(weight, s.r_min, s.r_max, breaks, 1e-10, 1e-14);
    parts.push_back(part);
    total += part;
  }
  if (u.has_coupled && u.r_m0 > s.r_min) {
    const double top = std::min(s.r_max, u.r_m0);
    auto weight = [&](double r) {
      return p_closest(kCoupled, r, s, u) * coupled_distance_pdf(r, s.r_min, u.r_m0);
    };
    auto f = [&](double r) { return weight(r) * branch(kCoupled, u.coupled_tier, r); };
    const double part = integrate(f, s.r_min, top, cfg.outer_rel_tol, 1e-12);
    mass += integrate(weight, s.r_min, top, 1e-10, 1e-14);
    parts.push_back(part);
    total += part;
  }
  if (detail) {
    detail->ue_tier = s.ue_tiers[ue_tier].id;
    detail->aakcp = total;
    detail->association_mass = mass;
    detail->by_kstar = parts;
  }
  return std::clamp(total, 0.0, 1.0);
}

MetricReport aakcp(double tau_db, const Scenario& s, const SleepPolicy& policy,
                   const std::vector<LoadModel>& loads, const AnalyticConfig& cfg) {
  MetricReport rep;
  rep.tau_db = tau_db;
  rep.q = policy.ratios();
  const double tau = db_to_linear(tau_db);
  const double total_density = s.ue_density_total();
  for (std::size_t u = 0; u < s.ue_tiers.size(); ++u) {
    UeTierMetric m;
    aakcp_ue_tier(tau, u, s, policy, loads, cfg, &m);
    rep.aakcp += s.ue_tiers[u].density() / total_density * m.aakcp;
    rep.per_ue_tier.push_back(m);
  }
  rep.power_net = power_net(s, rep.q);
  rep.ase = area_spectral_efficiency(rep.aakcp, tau, s);
  rep.ee = energy_efficiency(rep.ase, rep.power_net);
  return rep;
}

double bs_power(const Scenario& s, std::size_t k, double q) {
  const auto& t = s.bs_tiers.at(k);
  const double active = t.p_stat_w + t.antennas * s.power.p_a_w + s.power.delta_p * t.tx_power_w();
  return (1.0 - q) * t.p_sleep_w + q * active;
}

double power_net(const Scenario& s, const std::vector<double>& q) {
  double p = 0.0;
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) p += s.bs_tiers[k].intensity * bs_power(s, k, q.at(k));
  return p;
}

double area_spectral_efficiency(double aakcp, double tau_linear, const Scenario& s) {
  return s.bs_density_total() * aakcp * std::log2(1.0 + tau_linear);
}

double energy_efficiency(double ase, double p_net) {
  if (p_net <= 0.0) throw DomainError("energy_efficiency: network power must be > 0");
  return ase / p_net;
}

}  // namespace hetsleep
