#include "hetsleep/load.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "hetsleep/specfun.hpp"

namespace hetsleep {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kRadialOrder = 16;
constexpr double kRadialPanel = 8.0;
constexpr int kLensOrder = 32;
}  // namespace

double xi(double r, double w, double r_m) {
  if (r <= 0.0) return 0.0;
  if (w >= r + r_m) return 0.0;
  if (w <= std::abs(r - r_m)) {
    const double a = std::min(r, r_m);
    return a * a / (r_m * r_m);
  }
  const double c1 = std::clamp((w * w + r * r - r_m * r_m) / (2.0 * w * r), -1.0, 1.0);
  const double c2 = std::clamp((w * w + r_m * r_m - r * r) / (2.0 * w * r_m), -1.0, 1.0);
  const double k = (-w + r + r_m) * (w + r - r_m) * (w - r + r_m) * (w + r + r_m);
  const double area = r * r * std::acos(c1) + r_m * r_m * std::acos(c2) - 0.5 * std::sqrt(std::max(k, 0.0));
  return std::clamp(area / (kPi * r_m * r_m), 0.0, 1.0);
}

double exclusion_distance(const LoadModelConfig& cfg, double r_c) {
  switch (cfg.chi_mode) {
    case ChiMode::zero: return 0.0;
    case ChiMode::two_rc: return 2.0 * r_c;
    default: return std::min(cfg.chi_m, 2.0 * r_c);
  }
}

namespace {

// Weights/xi pairs such that int_chi^inf (1 - exp(-c xi(r_c, w))) w dw is
// sum_j weight_j (1 - exp(-c xi_j)). The flat part w < |r_c - r_m| is exact;
// the lens part uses a cosine substitution that smooths the tangency ends.
void cluster_weights(double r_c, double r_m, double chi, std::vector<double>& weight,
                     std::vector<double>& xis) {
  weight.clear();
  xis.clear();
  const double d = std::abs(r_c - r_m);
  const double top = r_c + r_m;
  if (chi < d) {
    weight.push_back(0.5 * (d * d - chi * chi));
    xis.push_back(xi(r_c, 0.0, r_m));
  }
  const double lo = std::max(chi, d);
  if (lo >= top) return;
  const auto q = gauss_legendre(0.0, kPi, kLensOrder);
  const double half = 0.5 * (top - lo);
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    const double t = q.x[i];
    const double w = lo + half * (1.0 - std::cos(t));
    const double jac = half * std::sin(t);
    weight.push_back(q.w[i] * jac * w);
    xis.push_back(xi(r_c, w, r_m));
  }
}

std::complex<double> cluster_log_pgf(std::complex<double> theta, double mean_size, double scale,
                                     const std::vector<double>& weight,
                                     const std::vector<double>& xis) {
  const std::complex<double> c = mean_size * (1.0 - theta);
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < weight.size(); ++j) acc += weight[j] * (1.0 - std::exp(-c * xis[j]));
  return -scale * acc;
}

}  // namespace

std::complex<double> pgf_cat12(std::complex<double> theta, double r_c, const UeTier& tier,
                               double chi) {
  if (tier.category != 1 && tier.category != 2)
    throw DomainError("pgf_cat12: tier must be of category 1 or 2");
  std::vector<double> weight, xis;
  cluster_weights(r_c, tier.cluster_radius, chi, weight, xis);
  return std::exp(cluster_log_pgf(theta, tier.mean_cluster_size, 2.0 * kPi * tier.parent_intensity,
                                  weight, xis));
}

std::complex<double> pgf_cat2_linked(std::complex<double> theta, double r_c, double mean_size,
                                     double r_m) {
  return std::exp(-mean_size * (1.0 - theta) * xi(r_c, 0.0, r_m));
}

std::complex<double> pgf_cat3(std::complex<double> theta, double r_c, double intensity) {
  return std::exp(-kPi * intensity * (1.0 - theta) * r_c * r_c);
}

double cell_radius_omega(const Scenario& s) { return 1.0 / (kPi * s.bs_density_total()); }

double cell_radius_pdf(const Scenario& s, double r) {
  return nakagami_pdf(kCellRadiusShape, cell_radius_omega(s), r);
}

double cell_radius_ccdf(const Scenario& s, double r) {
  return nakagami_ccdf(kCellRadiusShape, cell_radius_omega(s), r);
}

double LoadPmf::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
  return m;
}

double LoadPmf::tail(long t) const {
  if (t <= 0) return 1.0;
  double s = 0.0;
  for (std::size_t n = static_cast<std::size_t>(std::min<long>(t, static_cast<long>(p.size())));
       n < p.size(); ++n)
    s += p[n];
  return s;
}

double SleepRule::awake_given_load(long load) const {
  if (mu == kNever) return 0.0;
  if (load >= mu) return 1.0;
  if (load == mu - 1) return boundary_prob;
  return 0.0;
}

SleepRule threshold_from_ratio(const LoadPmf& pmf, double q, bool exact) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("threshold_from_ratio: q must be in [0, 1]");
  if (pmf.p.empty()) throw DomainError("threshold_from_ratio: empty PMF");
  SleepRule rule;
  rule.target_q = q;
  if (q == 0.0) {
    rule.mu = SleepRule::kNever;
    rule.achieved_q = 0.0;
    return rule;
  }
  // tails[t] = P(load >= t), t = 0..N
  const std::size_t n = pmf.p.size();
  std::vector<double> tails(n + 1, 0.0);
  for (std::size_t t = n; t-- > 0;) tails[t] = tails[t + 1] + pmf.p[t];
  const double total = tails[0];
  for (auto& v : tails) v /= total;
  tails[0] = 1.0;
  long mu_det = 0;
  for (std::size_t t = 0; t <= n; ++t)
    if (tails[t] >= q) mu_det = static_cast<long>(t);
  const auto ud = static_cast<std::size_t>(mu_det);
  if (!exact || std::abs(tails[ud] - q) <= 1e-12 || ud >= n) {
    rule.mu = mu_det;
    rule.boundary_prob = 0.0;
    rule.achieved_q = tails[ud];
    return rule;
  }
  const double p_at = pmf.p[ud] / total;
  if (p_at <= 0.0) throw DomainError("threshold_from_ratio: degenerate PMF at the threshold");
  rule.mu = mu_det + 1;
  rule.boundary_prob = std::clamp((q - tails[ud + 1]) / p_at, 0.0, 1.0);
  rule.achieved_q = tails[ud + 1] + rule.boundary_prob * p_at;
  return rule;
}

SleepRule rule_from_threshold(const LoadPmf& pmf, long mu) {
  if (mu < 0) throw DomainError("rule_from_threshold: mu must be >= 0");
  SleepRule rule;
  rule.mu = mu;
  rule.achieved_q = pmf.tail(mu);
  rule.target_q = rule.achieved_q;
  return rule;
}

LoadModel::LoadModel(const Scenario& s, std::size_t bs_tier) : s_(s), k_(bs_tier) {
  if (k_ >= s_.bs_tiers.size()) throw DomainError("LoadModel: BS tier index out of range");
  omega_ = cell_radius_omega(s_);
  const double x_hi = boost::math::gamma_q_inv(kCellRadiusShape, s_.load.radius_tail);
  r_hi_ = std::sqrt(x_hi * omega_ / kCellRadiusShape);

  std::vector<double> breaks;
  for (const auto& t : s_.ue_tiers) {
    if (t.category == 3) continue;
    const double rm = t.cluster_radius;
    breaks.push_back(rm);
    if (t.category == 2) {
      breaks.push_back(rm / 3.0);
      if (s_.load.chi_mode == ChiMode::fixed) {
        const double c = s_.load.chi_m;
        for (double b : {rm - c, rm + c, c - rm, 0.5 * c}) breaks.push_back(b);
      }
    }
  }
  std::vector<double> pts{0.0};
  for (double b : breaks)
    if (b > 0.0 && b < r_hi_) pts.push_back(b);
  pts.push_back(r_hi_);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return b - a < 1e-9; }),
            pts.end());

  ref_ = gauss_legendre(-1.0, 1.0, kRadialOrder);
  bary_.resize(ref_.x.size());
  for (std::size_t j = 0; j < ref_.x.size(); ++j) {
    double prod = 1.0;
    for (std::size_t i = 0; i < ref_.x.size(); ++i)
      if (i != j) prod *= ref_.x[j] - ref_.x[i];
    bary_[j] = 1.0 / prod;
  }

  for (std::size_t seg = 0; seg + 1 < pts.size(); ++seg) {
    const double len = pts[seg + 1] - pts[seg];
    const int count = std::max(1, static_cast<int>(std::ceil(len / kRadialPanel)));
    for (int p = 0; p < count; ++p) {
      Panel panel;
      panel.lo = pts[seg] + len * p / count;
      panel.hi = pts[seg] + len * (p + 1) / count;
      panel.first = nodes_.size();
      panel.count = ref_.x.size();
      const double h = 0.5 * (panel.hi - panel.lo);
      const double c = 0.5 * (panel.hi + panel.lo);
      for (std::size_t i = 0; i < ref_.x.size(); ++i) {
        Node n;
        n.r = c + h * ref_.x[i];
        n.wf = h * ref_.w[i] * nakagami_pdf(kCellRadiusShape, omega_, n.r);
        build_node(n);
        nodes_.push_back(std::move(n));
      }
      panels_.push_back(panel);
    }
  }
  resolve();
}

void LoadModel::build_node(Node& n) const {
  const int own_id = s_.bs_tiers[k_].id;
  for (const auto& t : s_.ue_tiers) {
    TierTerm term;
    term.mean_size = t.mean_cluster_size;
    if (t.category == 3) {
      term.kind = TierTerm::uniform;
      term.scale = t.intensity;
      term.lin = kPi * n.r * n.r;
    } else if (t.category == 2 && t.coupled_bs_tier == own_id) {
      term.kind = TierTerm::linked;
      term.lin = xi(n.r, 0.0, t.cluster_radius);
    } else {
      term.kind = TierTerm::cluster;
      term.scale = 2.0 * kPi * t.parent_intensity;
      const double chi = t.category == 1 ? 0.0 : exclusion_distance(s_.load, n.r);
      cluster_weights(n.r, t.cluster_radius, chi, term.weight, term.xi);
    }
    n.terms.push_back(std::move(term));
  }
}

std::complex<double> LoadModel::node_pgf(const Node& n, std::complex<double> theta) const {
  std::complex<double> log_g = 0.0;
  for (const auto& t : n.terms) {
    switch (t.kind) {
      case TierTerm::uniform: log_g -= t.scale * (1.0 - theta) * t.lin; break;
      case TierTerm::linked: log_g -= t.mean_size * (1.0 - theta) * t.lin; break;
      case TierTerm::cluster:
        log_g += cluster_log_pgf(theta, t.mean_size, t.scale, t.weight, t.xi);
        break;
    }
  }
  return std::exp(log_g);
}

double LoadModel::node_mean(const Node& n) const {
  double m = 0.0;
  for (const auto& t : n.terms) {
    switch (t.kind) {
      case TierTerm::uniform: m += t.scale * t.lin; break;
      case TierTerm::linked: m += t.mean_size * t.lin; break;
      case TierTerm::cluster: {
        double acc = 0.0;
        for (std::size_t j = 0; j < t.weight.size(); ++j) acc += t.weight[j] * t.xi[j];
        m += t.scale * t.mean_size * acc;
        break;
      }
    }
  }
  return m;
}

void LoadModel::resolve() {
  const int n = s_.load.dft_size;
  const double mean = mean_load();
  if (mean + 10.0 * std::sqrt(mean) >= n) {
    std::ostringstream msg;
    msg << "load PMF: dft_size " << n << " too small for mean load " << mean;
    throw AliasingError(msg.str());
  }
  node_pmf_.resize(nodes_.size());
  node_tail_.resize(nodes_.size());
  std::vector<std::complex<double>> samples(static_cast<std::size_t>(n));
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (int k = 0; k <= n / 2; ++k) {
      const std::complex<double> theta = std::polar(1.0, 2.0 * kPi * k / n);
      samples[static_cast<std::size_t>(k)] = node_pgf(nodes_[i], theta);
    }
    for (int k = n / 2 + 1; k < n; ++k)
      samples[static_cast<std::size_t>(k)] = std::conj(samples[static_cast<std::size_t>(n - k)]);
    auto p = inverse_dft_real(samples);
    double raw = 0.0;
    for (auto& v : p) {
      raw += v;
      v = std::max(v, 0.0);
    }
    mass += nodes_[i].wf * raw;
    std::vector<double> tail(p.size() + 1, 0.0);
    for (std::size_t t = p.size(); t-- > 0;) tail[t] = tail[t + 1] + p[t];
    for (std::size_t t = 0; t < p.size(); ++t) acc[t] += nodes_[i].wf * p[t];
    node_pmf_[i] = std::move(p);
    node_tail_[i] = std::move(tail);
  }
  pmf_.tier = s_.bs_tiers[k_].id;
  pmf_.mass = mass;
  if (std::abs(mass - 1.0) > 1e-4) {
    std::ostringstream msg;
    msg << "load PMF: total mass " << mass << " deviates from 1";
    throw AliasingError(msg.str());
  }
  double total = 0.0;
  for (double v : acc) total += v;
  pmf_.p.resize(acc.size());
  for (std::size_t t = 0; t < acc.size(); ++t) pmf_.p[t] = acc[t] / total;
  double upper = 0.0;
  for (std::size_t t = acc.size() * 9 / 10; t < acc.size(); ++t) upper += pmf_.p[t];
  if (upper > 1e-6) {
    std::ostringstream msg;
    msg << "load PMF: " << upper << " of the mass sits in the top decile of the DFT grid";
    throw AliasingError(msg.str());
  }
}

std::vector<std::pair<std::size_t, double>> LoadModel::tail_coefficients(double r) const {
  std::vector<std::pair<std::size_t, double>> out;
  if (r <= 0.0) {
    out.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) out.emplace_back(i, nodes_[i].wf);
    return out;
  }
  if (r >= r_hi_) {
    // Beyond the radius cutoff: hold the outermost node.
    out.emplace_back(nodes_.size() - 1, 1.0);
    return out;
  }
  for (const auto& panel : panels_) {
    if (panel.hi <= r) continue;
    if (panel.lo >= r) {
      for (std::size_t i = 0; i < panel.count; ++i)
        out.emplace_back(panel.first + i, nodes_[panel.first + i].wf);
      continue;
    }
    // Partial panel: integrate the panel interpolant over [r, hi].
    std::vector<double> coef(panel.count, 0.0);
    const auto sub = gauss_legendre(r, panel.hi, kRadialOrder);
    const double h = 0.5 * (panel.hi - panel.lo);
    const double c = 0.5 * (panel.hi + panel.lo);
    for (std::size_t q = 0; q < sub.x.size(); ++q) {
      const double y = sub.x[q];
      const double fw = sub.w[q] * nakagami_pdf(kCellRadiusShape, omega_, y);
      const double t = (y - c) / h;
      double denom = 0.0;
      std::vector<double> lj(panel.count);
      bool exact = false;
      for (std::size_t j = 0; j < panel.count; ++j) {
        const double d = t - ref_.x[j];
        if (d == 0.0) {
          std::fill(lj.begin(), lj.end(), 0.0);
          lj[j] = 1.0;
          exact = true;
          break;
        }
        lj[j] = bary_[j] / d;
        denom += lj[j];
      }
      for (std::size_t j = 0; j < panel.count; ++j)
        coef[j] += fw * (exact ? lj[j] : lj[j] / denom);
    }
    for (std::size_t j = 0; j < panel.count; ++j) out.emplace_back(panel.first + j, coef[j]);
  }
  return out;
}

std::complex<double> LoadModel::pgf(std::complex<double> theta,
                                    std::optional<double> min_radius) const {
  const auto coef = tail_coefficients(min_radius.value_or(0.0));
  std::complex<double> acc = 0.0;
  double norm = 0.0;
  for (const auto& [i, c] : coef) {
    acc += c * node_pgf(nodes_[i], theta);
    norm += c;
  }
  return acc / norm;
}

double LoadModel::mean_load(std::optional<double> min_radius) const {
  const auto coef = tail_coefficients(min_radius.value_or(0.0));
  double acc = 0.0;
  double norm = 0.0;
  for (const auto& [i, c] : coef) {
    acc += c * node_mean(nodes_[i]);
    norm += c;
  }
  return acc / norm;
}

const LoadPmf& LoadModel::pmf() const { return pmf_; }

LoadPmf LoadModel::conditional_pmf(double min_radius) const {
  LoadPmf out;
  out.tier = pmf_.tier;
  out.min_radius = min_radius;
  out.p.assign(pmf_.p.size(), 0.0);
  double norm = 0.0;
  for (const auto& [i, c] : tail_coefficients(min_radius)) {
    for (std::size_t t = 0; t < out.p.size(); ++t) out.p[t] += c * node_pmf_[i][t];
    norm += c;
  }
  double mass = 0.0;
  for (auto& v : out.p) {
    v = std::max(v / norm, 0.0);
    mass += v;
  }
  out.mass = mass;
  for (auto& v : out.p) v /= mass;
  return out;
}

double LoadModel::awake_prob(const SleepRule& rule, double r) const {
  if (rule.mu == SleepRule::kNever) return 0.0;
  if (rule.mu <= 0) return 1.0;
  const auto n = static_cast<long>(pmf_.p.size());
  double acc = 0.0;
  double norm = 0.0;
  for (const auto& [i, c] : tail_coefficients(r)) {
    double a = rule.mu <= n ? node_tail_[i][static_cast<std::size_t>(rule.mu)] : 0.0;
    if (rule.mu - 1 < n) a += rule.boundary_prob * node_pmf_[i][static_cast<std::size_t>(rule.mu - 1)];
    acc += c * a;
    norm += c;
  }
  return std::clamp(acc / norm, 0.0, 1.0);
}

double SleepPolicy::q(std::size_t k) const {
  if (kind == PolicyKind::none) return 1.0;
  return rules.at(k).achieved_q;
}

std::vector<double> SleepPolicy::ratios() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < rules.size(); ++k) out.push_back(q(k));
  return out;
}

std::vector<LoadModel> build_load_models(const Scenario& s) {
  std::vector<LoadModel> out;
  out.reserve(s.bs_tiers.size());
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) out.emplace_back(s, k);
  return out;
}

SleepPolicy strategic_policy(const std::vector<LoadModel>& loads, const std::vector<double>& q,
                             bool exact) {
  if (q.size() != loads.size()) throw DomainError("strategic_policy: one ratio per BS tier expected");
  SleepPolicy p;
  p.kind = PolicyKind::strategic;
  for (std::size_t k = 0; k < loads.size(); ++k)
    p.rules.push_back(threshold_from_ratio(loads[k].pmf(), q[k], exact));
  return p;
}

SleepPolicy threshold_policy(const std::vector<LoadModel>& loads, const std::vector<long>& mu) {
  if (mu.size() != loads.size()) throw DomainError("threshold_policy: one threshold per BS tier expected");
  SleepPolicy p;
  p.kind = PolicyKind::strategic;
  for (std::size_t k = 0; k < loads.size(); ++k) p.rules.push_back(rule_from_threshold(loads[k].pmf(), mu[k]));
  return p;
}

SleepPolicy random_policy(const std::vector<double>& q) {
  SleepPolicy p;
  p.kind = PolicyKind::random;
  for (double v : q) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("random_policy: q must be in [0, 1]");
    SleepRule r;
    r.target_q = v;
    r.achieved_q = v;
    p.rules.push_back(r);
  }
  return p;
}

SleepPolicy no_sleep_policy(std::size_t tiers) {
  SleepPolicy p;
  p.kind = PolicyKind::none;
  p.rules.assign(tiers, SleepRule{});
  return p;
}

}  // namespace hetsleep
