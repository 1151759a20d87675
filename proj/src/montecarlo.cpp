#include "hetsleep/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "hetsleep/channel.hpp"
#include "hetsleep/specfun.hpp"

namespace hetsleep {

void McConfig::validate() const {
  if (trials < 1) throw ConfigError("mc.trials: must be >= 1");
  if (batch < 1) throw ConfigError("mc.batch: must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("mc.confidence: must be in (0, 1)");
  if (pilot_realizations < 1) throw ConfigError("mc.pilot_realizations: must be >= 1");
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ index);
}

BsLocator::BsLocator(const Region& region, const std::vector<std::vector<Point>>& bs)
    : region_(region) {
  for (std::size_t k = 0; k < bs.size(); ++k) {
    offset_.push_back(pts_.size());
    for (std::size_t i = 0; i < bs[k].size(); ++i) {
      pts_.push_back(region_.wrap_point(bs[k][i]));
      refs_.push_back({k, i});
    }
  }
  const double n = std::max<double>(1.0, static_cast<double>(pts_.size()));
  cells_ = std::clamp(static_cast<int>(std::sqrt(n / 2.0)), 1, 512);
  cell_ = region_.side / cells_;
  const std::size_t nc = static_cast<std::size_t>(cells_) * cells_;
  std::vector<std::uint32_t> count(nc + 1, 0);
  std::vector<std::size_t> home(pts_.size());
  for (std::size_t g = 0; g < pts_.size(); ++g) {
    home[g] = cell_of(pts_[g]);
    ++count[home[g] + 1];
  }
  for (std::size_t c = 0; c < nc; ++c) count[c + 1] += count[c];
  start_ = count;
  bx_.resize(pts_.size());
  by_.resize(pts_.size());
  bid_.resize(pts_.size());
  for (std::size_t g = 0; g < pts_.size(); ++g) {
    const std::uint32_t slot = count[home[g]]++;
    bx_[slot] = pts_[g].x;
    by_[slot] = pts_[g].y;
    bid_[slot] = static_cast<std::uint32_t>(g);
  }
}

std::size_t BsLocator::cell_of(const Point& p) const {
  const Point q = region_.wrap_point(p);
  const int cx = std::clamp(static_cast<int>((q.x + region_.half()) / cell_), 0, cells_ - 1);
  const int cy = std::clamp(static_cast<int>((q.y + region_.half()) / cell_), 0, cells_ - 1);
  return static_cast<std::size_t>(cy) * cells_ + cx;
}

std::size_t BsLocator::nearest(const Point& p) const {
  if (pts_.empty()) throw DomainError("BsLocator: no base stations");
  const bool torus = region_.wrap == WrapMode::toroidal;
  const double side = region_.side;
  const Point q = region_.wrap_point(p);
  const int cx = std::clamp(static_cast<int>((q.x + region_.half()) / cell_), 0, cells_ - 1);
  const int cy = std::clamp(static_cast<int>((q.y + region_.half()) / cell_), 0, cells_ - 1);
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_g = 0;
  auto visit = [&](int ix, int iy) {
    if (torus) {
      ix = ix < 0 ? ix + cells_ : (ix >= cells_ ? ix - cells_ : ix);
      iy = iy < 0 ? iy + cells_ : (iy >= cells_ ? iy - cells_ : iy);
    } else if (ix < 0 || iy < 0 || ix >= cells_ || iy >= cells_) {
      return;
    }
    const std::size_t c = static_cast<std::size_t>(iy) * cells_ + ix;
    for (std::uint32_t i = start_[c]; i < start_[c + 1]; ++i) {
      double dx = q.x - bx_[i];
      double dy = q.y - by_[i];
      if (torus) {
        if (dx > 0.5 * side) dx -= side; else if (dx < -0.5 * side) dx += side;
        if (dy > 0.5 * side) dy -= side; else if (dy < -0.5 * side) dy += side;
      }
      const double d = dx * dx + dy * dy;
      if (d < best || (d == best && bid_[i] < best_g)) {
        best = d;
        best_g = bid_[i];
      }
    }
  };
  // Rings are visited until no unvisited cell can hold a closer point. On the
  // torus a ring past cells/2 wraps onto visited cells.
  const int max_ring = torus ? cells_ / 2 + 1 : cells_;
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (ring > 0) {
      const double reach = (ring - 1) * cell_;
      if (best <= reach * reach) break;
    }
    if (torus && 2 * ring + 1 > cells_) {
      for (int iy = 0; iy < cells_; ++iy)
        for (int ix = 0; ix < cells_; ++ix) {
          const int dx = std::abs(ix - cx), dy = std::abs(iy - cy);
          const int wx = std::min(dx, cells_ - dx), wy = std::min(dy, cells_ - dy);
          if (std::max(wx, wy) >= ring) visit(ix, iy);
        }
      break;
    }
    if (ring == 0) {
      visit(cx, cy);
      continue;
    }
    for (int d = -ring; d <= ring; ++d) {
      visit(cx + d, cy - ring);
      visit(cx + d, cy + ring);
    }
    for (int d = -ring + 1; d <= ring - 1; ++d) {
      visit(cx - ring, cy + d);
      visit(cx + ring, cy + d);
    }
  }
  return best_g;
}

std::vector<char> BsLocator::cells_reaching(const std::vector<std::size_t>& targets) const {
  const std::size_t nc = static_cast<std::size_t>(cells_) * cells_;
  std::vector<char> mask(nc, 0);
  if (targets.empty() || pts_.empty()) return mask;
  const double h = std::sqrt(0.5) * cell_;
  for (int iy = 0; iy < cells_; ++iy)
    for (int ix = 0; ix < cells_; ++ix) {
      const Point c{-region_.half() + (ix + 0.5) * cell_, -region_.half() + (iy + 0.5) * cell_};
      const double upper = std::sqrt(region_.dist2(c, pts_[nearest(c)])) + h;
      double lower = std::numeric_limits<double>::infinity();
      for (std::size_t g : targets) lower = std::min(lower, std::sqrt(region_.dist2(c, pts_[g])) - h);
      mask[static_cast<std::size_t>(iy) * cells_ + ix] = lower <= upper * (1.0 + 1e-9) ? 1 : 0;
    }
  return mask;
}

std::vector<long> cell_loads(const NetworkRealization& net, const BsLocator& loc,
                             const std::vector<char>& cell_mask) {
  std::vector<long> loads(loc.size(), 0);
  for (const auto& tier : net.ue)
    for (const auto& p : tier.points)
      if (cell_mask[loc.cell_of(p)]) ++loads[loc.nearest(p)];
  return loads;
}

std::vector<long> cell_loads(const NetworkRealization& net, const BsLocator& loc) {
  std::vector<long> loads(loc.size(), 0);
  for (const auto& tier : net.ue)
    for (const auto& p : tier.points) ++loads[loc.nearest(p)];
  return loads;
}

std::vector<long> cell_loads(const NetworkRealization& net) {
  return cell_loads(net, BsLocator(net.region, net.bs));
}

namespace {

bool awake_draw(const SleepPolicy& policy, std::size_t tier, long load, double u) {
  switch (policy.kind) {
    case PolicyKind::none: return true;
    case PolicyKind::random: return u < policy.rules.at(tier).achieved_q;
    case PolicyKind::strategic: {
      const auto& r = policy.rules.at(tier);
      if (r.mu == SleepRule::kNever) return false;
      if (load >= r.mu) return true;
      return load == r.mu - 1 && u < r.boundary_prob;
    }
  }
  return true;
}

}  // namespace

std::vector<char> apply_sleep(const std::vector<long>& loads, const BsLocator& loc,
                              const SleepPolicy& policy, const std::vector<double>& u) {
  std::vector<char> awake(loads.size());
  for (std::size_t g = 0; g < loads.size(); ++g)
    awake[g] = awake_draw(policy, loc.ref(g).tier, loads[g], u.at(g)) ? 1 : 0;
  return awake;
}

std::vector<char> apply_sleep(const std::vector<long>& loads, const BsLocator& loc,
                              const SleepPolicy& policy, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> u(loads.size());
  for (auto& v : u) v = unif(rng);
  return apply_sleep(loads, loc, policy, u);
}

namespace {

Region make_region(const Scenario& s) {
  Region r;
  r.side = s.window_side();
  r.wrap = s.window.wrap;
  return r;
}

double z_value(double confidence) {
  boost::math::normal n;
  return boost::math::quantile(n, 0.5 + 0.5 * confidence);
}

struct Candidate {
  std::size_t tier = 0;
  long load = 0;
  double r = 0.0;
  double u = 0.0;      // sleep draw
  double h = 0.0;      // fading
  double theta = 0.0;  // beam offset in [-1, 1]
};

// Counts accumulated over a block of trials: [case][tau][ue tier].
struct Tally {
  std::vector<long> covered;
  std::vector<long> awake;
  std::vector<long> in_range;
  void merge(const Tally& o) {
    for (std::size_t i = 0; i < covered.size(); ++i) covered[i] += o.covered[i];
    for (std::size_t i = 0; i < awake.size(); ++i) {
      awake[i] += o.awake[i];
      in_range[i] += o.in_range[i];
    }
  }
};

template <class F>
void parallel_blocks(long total, long batch, unsigned threads, F&& work) {
  const long blocks = (total + batch - 1) / batch;
  unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<long>(n, blocks));
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto loop = [&] {
    try {
      for (long b = next++; b < blocks; b = next++) work(b, b * batch, std::min(total, (b + 1) * batch));
    } catch (...) {
      std::lock_guard lk(err_mu);
      if (!err) err = std::current_exception();
      next = blocks;
    }
  };
  if (n <= 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

std::vector<double> tier_weights(const Scenario& s) {
  std::vector<double> w;
  const double tot = s.ue_density_total();
  for (const auto& t : s.ue_tiers) w.push_back(t.density() / tot);
  return w;
}

// Trials per UE tier: largest-remainder apportionment.
std::vector<long> apportion(long trials, const std::vector<double>& w) {
  std::vector<long> n(w.size());
  std::vector<std::pair<double, std::size_t>> rem;
  long used = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double e = trials * w[i];
    n[i] = static_cast<long>(std::floor(e));
    used += n[i];
    rem.push_back({e - n[i], i});
  }
  std::stable_sort(rem.begin(), rem.end(), [](auto a, auto b) { return a.first > b.first; });
  for (std::size_t i = 0; used < trials; ++i, ++used) ++n[rem[i % rem.size()].second];
  return n;
}

}  // namespace

McBank run_aakcp(const Scenario& s, const McConfig& cfg, const std::vector<McCase>& cases,
                 const std::vector<double>& tau_db) {
  s.validate();
  cfg.validate();
  if (cases.empty() || tau_db.empty()) throw ConfigError("run_aakcp: needs at least one case and tau");
  for (const auto& c : cases)
    if (c.policy.kind != PolicyKind::none && c.policy.rules.size() != s.bs_tiers.size())
      throw ConfigError("run_aakcp: policy '" + c.label + "' does not cover every BS tier");
  const std::size_t nu = s.ue_tiers.size();
  const std::size_t nc = cases.size();
  const std::size_t nt = tau_db.size();
  const std::size_t nk = s.bs_tiers.size();

  std::vector<double> weights = tier_weights(s);
  std::vector<long> per_tier;
  if (cfg.ue_tier) {
    if (*cfg.ue_tier >= nu) throw ConfigError("mc.ue_tier: index out of range");
    weights.assign(nu, 0.0);
    weights[*cfg.ue_tier] = 1.0;
  }
  per_tier = apportion(cfg.trials, weights);
  std::vector<long> first(nu + 1, 0);
  for (std::size_t u = 0; u < nu; ++u) first[u + 1] = first[u] + per_tier[u];
  auto tier_of = [&](long t) {
    std::size_t u = 0;
    while (t >= first[u + 1]) ++u;
    return u;
  };

  std::vector<double> tau_lin;
  for (double t : tau_db) tau_lin.push_back(db_to_linear(t));

  // Per-case tier parameters.
  struct CaseTier {
    double power_w;
    int antennas;
  };
  std::vector<std::vector<CaseTier>> ct(nc);
  for (std::size_t c = 0; c < nc; ++c)
    for (const auto& b : s.bs_tiers)
      ct[c].push_back({cases[c].power_dbm ? dbm_to_w(*cases[c].power_dbm) : b.tx_power_w(),
                       cases[c].antennas ? *cases[c].antennas : b.antennas});

  const Region region = make_region(s);
  const double alpha = s.channel.alpha;
  const double r_min2 = s.r_min * s.r_min;
  const double r_max2 = s.r_max * s.r_max;

  const long blocks = (cfg.trials + cfg.batch - 1) / cfg.batch;
  std::vector<Tally> tallies(static_cast<std::size_t>(blocks));

  parallel_blocks(cfg.trials, cfg.batch, cfg.threads, [&](long b, long lo, long hi) {
    Tally tl;
    tl.covered.assign(nc * nt * nu, 0);
    tl.awake.assign(nc, 0);
    tl.in_range.assign(nc, 0);
    std::vector<Candidate> cand;
    std::vector<std::size_t> targets;
    std::vector<double> sinr(nc);
    for (long t = lo; t < hi; ++t) {
      Rng rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(t)));
      const std::size_t u = tier_of(t);
      NetworkRealization net = realize_network(s, region, rng);
      make_typical_user(net, s, u, s.load.count_typical_in_load, rng);
      const BsLocator loc(region, net.bs);
      // Only the loads of BSs in range of the typical user are needed.
      cand.clear();
      targets.clear();
      for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t i = 0; i < net.bs[k].size(); ++i) {
          const double d2 = region.dist2({0.0, 0.0}, net.bs[k][i]);
          if (d2 < r_min2 || d2 > r_max2) continue;
          targets.push_back(loc.global(k, i));
          cand.push_back({k, 0, std::sqrt(d2), 0.0, 0.0, 0.0});
        }
      const auto loads = cell_loads(net, loc, loc.cells_reaching(targets));
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i].load = loads[targets[i]];
      std::stable_sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.r < b.r; });
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (auto& c : cand) {
        c.u = unif(rng);
        c.h = sample_fading(s.channel.m, rng);
        c.theta = 2.0 * unif(rng) - 1.0;
      }

      for (std::size_t c = 0; c < nc; ++c) {
        const auto& pol = cases[c].policy;
        double signal = -1.0;
        double interference = 0.0;
        for (const auto& x : cand) {
          if (!awake_draw(pol, x.tier, x.load, x.u)) continue;
          ++tl.awake[c];
          const auto& tp = ct[c][x.tier];
          const double path = s.channel.beta * tp.power_w * std::pow(x.r, -alpha);
          if (signal < 0.0)
            signal = path * tp.antennas * x.h;
          else
            interference += path * tp.antennas * x.h * kernel(cfg.kernel, 0.5 * x.theta, tp.antennas);
        }
        tl.in_range[c] += static_cast<long>(cand.size());
        sinr[c] = signal < 0.0 ? 0.0 : signal / (s.channel.noise_power + interference);
      }
      for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t k = 0; k < nt; ++k)
          if (sinr[c] > tau_lin[k]) ++tl.covered[(c * nt + k) * nu + u];
    }
    tallies[static_cast<std::size_t>(b)] = std::move(tl);
  });

  Tally total = tallies[0];
  for (std::size_t b = 1; b < tallies.size(); ++b) total.merge(tallies[b]);

  const double z = z_value(cfg.confidence);
  McBank bank;
  bank.tau_db = tau_db;
  bank.trials = cfg.trials;
  for (std::size_t c = 0; c < nc; ++c) {
    McCaseResult res;
    res.awake_fraction =
        total.in_range[c] ? static_cast<double>(total.awake[c]) / total.in_range[c] : 0.0;
    res.per_ue_tier.resize(nt);
    for (std::size_t k = 0; k < nt; ++k) {
      McEstimate est;
      double var = 0.0;
      for (std::size_t u = 0; u < nu; ++u) {
        McEstimate e;
        e.trials = per_tier[u];
        if (e.trials > 0) {
          const double p = static_cast<double>(total.covered[(c * nt + k) * nu + u]) / e.trials;
          e.value = p;
          e.half_width = z * std::sqrt(p * (1.0 - p) / e.trials);
          est.value += weights[u] * p;
          var += weights[u] * weights[u] * p * (1.0 - p) / e.trials;
        }
        res.per_ue_tier[k].push_back(e);
      }
      est.half_width = z * std::sqrt(var);
      est.trials = cfg.trials;
      res.coverage.push_back(est);
    }
    bank.cases.push_back(std::move(res));
  }
  return bank;
}

McEstimate run_aakcp(const Scenario& s, const McConfig& cfg, const SleepPolicy& policy, double tau_db) {
  return run_aakcp(s, cfg, {McCase{"policy", policy, {}, {}}}, {tau_db}).cases[0].coverage[0];
}

std::vector<LoadPmf> empirical_load_pmfs(const Scenario& s, const McConfig& cfg,
                                         std::optional<long> realizations) {
  s.validate();
  const long n = realizations.value_or(cfg.pilot_realizations);
  if (n < 1) throw ConfigError("empirical_load_pmf: realizations must be >= 1");
  const std::size_t nk = s.bs_tiers.size();
  const Region region = make_region(s);
  const long batch = 4;
  const long blocks = (n + batch - 1) / batch;
  std::vector<std::vector<std::vector<long>>> hist(static_cast<std::size_t>(blocks));
  parallel_blocks(n, batch, cfg.threads, [&](long b, long lo, long hi) {
    std::vector<std::vector<long>> h(nk);
    for (long r = lo; r < hi; ++r) {
      // Pilot streams are disjoint from the trial streams.
      Rng rng(substream_seed(cfg.seed ^ 0x5a17c0ffee5eedULL, static_cast<std::uint64_t>(r)));
      const auto net = realize_network(s, region, rng);
      const BsLocator loc(region, net.bs);
      const auto loads = cell_loads(net, loc);
      for (std::size_t g = 0; g < loads.size(); ++g) {
        auto& v = h[loc.ref(g).tier];
        const auto l = static_cast<std::size_t>(loads[g]);
        if (v.size() <= l) v.resize(l + 1, 0);
        ++v[l];
      }
    }
    hist[static_cast<std::size_t>(b)] = std::move(h);
  });
  std::vector<LoadPmf> out;
  for (std::size_t k = 0; k < nk; ++k) {
    std::vector<long> h(static_cast<std::size_t>(s.load.dft_size), 0);
    for (const auto& blk : hist) {
      if (blk[k].size() > h.size()) h.resize(blk[k].size(), 0);
      for (std::size_t i = 0; i < blk[k].size(); ++i) h[i] += blk[k][i];
    }
    LoadPmf pmf;
    pmf.tier = s.bs_tiers[k].id;
    long tot = 0;
    for (long v : h) tot += v;
    pmf.p.resize(h.size(), 0.0);
    if (tot > 0)
      for (std::size_t i = 0; i < h.size(); ++i) pmf.p[i] = static_cast<double>(h[i]) / tot;
    pmf.mass = tot > 0 ? 1.0 : 0.0;
    out.push_back(std::move(pmf));
  }
  return out;
}

LoadPmf empirical_load_pmf(const Scenario& s, std::size_t bs_tier, const McConfig& cfg,
                           std::optional<long> realizations, int size) {
  if (bs_tier >= s.bs_tiers.size()) throw ConfigError("empirical_load_pmf: BS tier index out of range");
  auto all = empirical_load_pmfs(s, cfg, realizations);
  LoadPmf p = std::move(all[bs_tier]);
  if (size > 0 && static_cast<std::size_t>(size) > p.p.size()) p.p.resize(static_cast<std::size_t>(size), 0.0);
  return p;
}

SleepPolicy empirical_strategic_policy(const std::vector<LoadPmf>& pmfs, const std::vector<double>& q) {
  if (pmfs.size() != q.size()) throw ConfigError("strategic policy: one ratio per BS tier required");
  SleepPolicy p;
  p.kind = PolicyKind::strategic;
  for (std::size_t k = 0; k < q.size(); ++k) p.rules.push_back(threshold_from_ratio(pmfs[k], q[k], true));
  return p;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    d += std::abs(x - y);
  }
  return 0.5 * d;
}

SweepParam sweep_param_from_string(const std::string& name) {
  static const std::map<std::string, SweepParam> m{{"tau_db", SweepParam::tau_db},
                                                   {"q", SweepParam::q},
                                                   {"power_dbm", SweepParam::power_dbm},
                                                   {"antennas", SweepParam::antennas},
                                                   {"epsilon", SweepParam::epsilon}};
  auto it = m.find(name);
  if (it == m.end())
    throw ConfigError("sweep parameter '" + name + "': expected tau_db, q, power_dbm, antennas or epsilon");
  return it->second;
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::tau_db: return "tau_db";
    case SweepParam::q: return "q";
    case SweepParam::power_dbm: return "power_dbm";
    case SweepParam::antennas: return "antennas";
    case SweepParam::epsilon: return "epsilon";
  }
  return "?";
}

std::string SweepCurve::label() const {
  std::ostringstream os;
  switch (kind) {
    case PolicyKind::strategic: os << "SS(" << q << ")"; break;
    case PolicyKind::random: os << "RS(" << q << ")"; break;
    case PolicyKind::none: os << "none"; break;
  }
  return os.str();
}

Scenario apply_sweep_value(const Scenario& s, SweepParam p, double v) {
  Scenario out = s;
  switch (p) {
    case SweepParam::power_dbm:
      for (auto& b : out.bs_tiers) b.tx_power_dbm = v;
      break;
    case SweepParam::antennas:
      if (v < 1.0 || std::nearbyint(v) != v) throw ConfigError("antennas: must be a positive integer");
      for (auto& b : out.bs_tiers) b.antennas = static_cast<int>(v);
      break;
    case SweepParam::epsilon:
      if (v < 0.0) throw ConfigError("epsilon: must be >= 0");
      for (auto& b : out.bs_tiers) b.p_sleep_w = v * b.p_stat_w;
      break;
    case SweepParam::tau_db: out.tau_db = v; break;
    case SweepParam::q: break;
  }
  return out;
}

void mark_argmax(std::vector<SweepRow>& rows) {
  std::map<std::string, std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].argmax = false;
    auto it = best.find(rows[i].curve);
    if (it == best.end() || rows[i].ee > rows[it->second].ee) best[rows[i].curve] = i;
  }
  for (const auto& [_, i] : best) rows[i].argmax = true;
}

namespace {

SleepPolicy curve_policy(const SweepCurve& c, double q, const std::vector<LoadPmf>& pilot,
                         std::size_t tiers) {
  const std::vector<double> qs(tiers, q);
  switch (c.kind) {
    case PolicyKind::strategic: return empirical_strategic_policy(pilot, qs);
    case PolicyKind::random: return random_policy(qs);
    case PolicyKind::none: return no_sleep_policy(tiers);
  }
  return no_sleep_policy(tiers);
}

SweepRow make_row(const Scenario& s, const std::string& curve, double x, double tau_db,
                  const SleepPolicy& pol, const McEstimate& est) {
  SweepRow r;
  r.curve = curve;
  r.x = x;
  r.tau_db = tau_db;
  r.q = pol.kind == PolicyKind::none ? std::vector<double>(s.bs_tiers.size(), 1.0) : pol.ratios();
  r.aakcp = est;
  const double tau = db_to_linear(tau_db);
  const double scale = s.bs_density_total() * std::log2(1.0 + tau);
  r.ase = scale * est.value;
  double p = 0.0;
  for (std::size_t k = 0; k < s.bs_tiers.size(); ++k) {
    const auto& t = s.bs_tiers[k];
    const double q = r.q[k];
    p += t.intensity * ((1.0 - q) * t.p_sleep_w +
                        q * (t.p_stat_w + t.antennas * s.power.p_a_w + s.power.delta_p * t.tx_power_w()));
  }
  r.power_net = p;
  r.ee = r.ase / p;
  r.ee_half_width = scale * est.half_width / p;
  return r;
}

}  // namespace

std::vector<SweepRow> run_sweep(const Scenario& s, const McConfig& cfg, const SweepSpec& spec) {
  if (spec.values.empty()) throw ConfigError("sweep: empty value grid");
  std::vector<SweepCurve> curves = spec.curves;
  if (curves.empty()) curves.push_back({PolicyKind::strategic, spec.q});
  const std::size_t nk = s.bs_tiers.size();
  bool need_pilot = false;
  for (const auto& c : curves) need_pilot |= c.kind == PolicyKind::strategic;
  std::vector<LoadPmf> pilot;
  if (need_pilot) pilot = empirical_load_pmfs(s, cfg);

  std::vector<McCase> cases;
  std::vector<std::pair<std::size_t, double>> meta;  // curve, x
  std::vector<double> taus{spec.tau_db};
  switch (spec.param) {
    case SweepParam::tau_db:
      taus = spec.values;
      [[fallthrough]];
    case SweepParam::epsilon:
      for (std::size_t i = 0; i < curves.size(); ++i) {
        cases.push_back({curves[i].label(), curve_policy(curves[i], curves[i].q, pilot, nk), {}, {}});
        meta.push_back({i, curves[i].q});
      }
      break;
    case SweepParam::q:
      for (std::size_t i = 0; i < curves.size(); ++i)
        for (double v : spec.values) {
          cases.push_back({curves[i].label(), curve_policy(curves[i], v, pilot, nk), {}, {}});
          meta.push_back({i, v});
        }
      break;
    case SweepParam::power_dbm:
    case SweepParam::antennas:
      for (std::size_t i = 0; i < curves.size(); ++i)
        for (double v : spec.values) {
          McCase c{curves[i].label(), curve_policy(curves[i], curves[i].q, pilot, nk), {}, {}};
          if (spec.param == SweepParam::power_dbm)
            c.power_dbm = v;
          else
            c.antennas = static_cast<int>(apply_sweep_value(s, spec.param, v).bs_tiers[0].antennas);
          cases.push_back(c);
          meta.push_back({i, v});
        }
      break;
  }
  const McBank bank = run_aakcp(s, cfg, cases, taus);

  std::vector<SweepRow> rows;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& [ci, x] = meta[c];
    const std::string label = curves[ci].label();
    switch (spec.param) {
      case SweepParam::tau_db:
        for (std::size_t k = 0; k < taus.size(); ++k)
          rows.push_back(make_row(s, label, taus[k], taus[k], cases[c].policy, bank.cases[c].coverage[k]));
        break;
      case SweepParam::epsilon:
        for (double e : spec.values) {
          std::ostringstream name;
          name << "eps=" << e << " " << (curves[ci].kind == PolicyKind::random ? "RS" : "SS");
          rows.push_back(make_row(apply_sweep_value(s, SweepParam::epsilon, e), name.str(), x,
                                  spec.tau_db, cases[c].policy, bank.cases[c].coverage[0]));
        }
        break;
      case SweepParam::q:
        rows.push_back(make_row(s, label, x, spec.tau_db, cases[c].policy, bank.cases[c].coverage[0]));
        break;
      case SweepParam::power_dbm:
      case SweepParam::antennas:
        rows.push_back(make_row(apply_sweep_value(s, spec.param, x), label, x, spec.tau_db,
                                cases[c].policy, bank.cases[c].coverage[0]));
        break;
    }
  }
  // Epsilon rows are grouped per (epsilon, kind); order them for readability.
  if (spec.param == SweepParam::epsilon)
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.curve < b.curve; });
  mark_argmax(rows);
  return rows;
}

}  // namespace hetsleep
