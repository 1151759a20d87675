#include "hetsleep/pointproc.hpp"

#include <cmath>
#include <numbers>

namespace hetsleep {

bool Region::contains(const Point& p) const {
  const double h = half();
  return p.x >= -h && p.x < h && p.y >= -h && p.y < h;
}

namespace {
double fold(double v, double side) {
  const double h = 0.5 * side;
  v = std::fmod(v + h, side);
  if (v < 0.0) v += side;
  return v - h;
}
double min_image(double d, double side) {
  if (d > 0.5 * side) return d - side;
  if (d < -0.5 * side) return d + side;
  return d;
}
}  // namespace

Point Region::wrap_point(Point p) const {
  if (wrap != WrapMode::toroidal) return p;
  return {fold(p.x, side), fold(p.y, side)};
}

double Region::dist2(const Point& a, const Point& b) const {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  if (wrap == WrapMode::toroidal) {
    dx = min_image(dx, side);
    dy = min_image(dy, side);
  }
  return dx * dx + dy * dy;
}

namespace {
std::vector<Point> uniform_square(double intensity, double side, Rng& rng) {
  std::vector<Point> pts;
  if (intensity <= 0.0) return pts;
  std::poisson_distribution<long> count(intensity * side * side);
  const long n = count(rng);
  std::uniform_real_distribution<double> u(-0.5 * side, 0.5 * side);
  pts.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    pts.push_back({x, y});
  }
  return pts;
}
}  // namespace

std::vector<Point> sample_hppp(double intensity, const Region& region, Rng& rng) {
  return uniform_square(intensity, region.side, rng);
}

Point uniform_in_disk(const Point& c, double radius, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return {c.x + r * std::cos(phi), c.y + r * std::sin(phi)};
}

ClusteredPoints sample_mcp(const std::vector<Point>& parents, double mean_per_cluster,
                           double radius, const Region& region, Rng& rng) {
  ClusteredPoints out;
  out.parents = parents;
  std::poisson_distribution<int> count(mean_per_cluster);
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const int n = count(rng);
    for (int d = 0; d < n; ++d) {
      Point p = uniform_in_disk(parents[i], radius, rng);
      if (region.wrap == WrapMode::toroidal) {
        p = region.wrap_point(p);
      } else if (!region.contains(p)) {
        continue;
      }
      out.points.push_back(p);
      out.parent.push_back(static_cast<int>(i));
    }
  }
  return out;
}

ClusteredPoints sample_mcp(double parent_intensity, double mean_per_cluster, double radius,
                           const Region& region, Rng& rng) {
  const double side = region.wrap == WrapMode::toroidal ? region.side : region.side + 2.0 * radius;
  const auto parents = uniform_square(parent_intensity, side, rng);
  return sample_mcp(parents, mean_per_cluster, radius, region, rng);
}

NetworkRealization realize_network(const Scenario& s, const Region& region, Rng& rng) {
  NetworkRealization net;
  net.region = region;
  for (const auto& t : s.bs_tiers) net.bs.push_back(sample_hppp(t.intensity, region, rng));
  for (const auto& t : s.ue_tiers) {
    ClusteredPoints c;
    switch (t.category) {
      case 1:
        c = sample_mcp(t.parent_intensity, t.mean_cluster_size, t.cluster_radius, region, rng);
        break;
      case 2:
        c = sample_mcp(net.bs[s.bs_index(t.coupled_bs_tier)], t.mean_cluster_size,
                       t.cluster_radius, region, rng);
        break;
      default:
        c.points = sample_hppp(t.intensity, region, rng);
        c.parent.assign(c.points.size(), -1);
        break;
    }
    net.ue.push_back(std::move(c));
  }
  return net;
}

TypicalUser make_typical_user(NetworkRealization& net, const Scenario& s, std::size_t ue_tier,
                              bool count_typical, Rng& rng) {
  const auto& t = s.ue_tiers.at(ue_tier);
  TypicalUser tu;
  tu.ue_tier = ue_tier;
  auto& cluster = net.ue[ue_tier];
  if (t.category == 1 || t.category == 2) {
    Point center;
    if (t.category == 2) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double lo = s.r_min * s.r_min;
      const double hi = t.cluster_radius * t.cluster_radius;
      const double r = std::sqrt(lo + (hi - lo) * u(rng));
      const double phi = 2.0 * std::numbers::pi * u(rng);
      center = {r * std::cos(phi), r * std::sin(phi)};
      const std::size_t k = s.bs_index(t.coupled_bs_tier);
      net.bs[k].push_back(center);
      tu.tier0_bs_tier = k;
      tu.tier0_bs = net.bs[k].size() - 1;
    } else {
      center = uniform_in_disk({0.0, 0.0}, t.cluster_radius, rng);
    }
    cluster.parents.push_back(center);
    const int parent = static_cast<int>(cluster.parents.size() - 1);
    std::poisson_distribution<int> count(t.mean_cluster_size);
    const int n = count(rng);
    for (int d = 0; d < n; ++d) {
      cluster.points.push_back(net.region.wrap_point(uniform_in_disk(center, t.cluster_radius, rng)));
      cluster.parent.push_back(parent);
    }
    tu.siblings = static_cast<std::size_t>(n);
    if (count_typical) {
      cluster.points.push_back({0.0, 0.0});
      cluster.parent.push_back(parent);
    }
  } else if (count_typical) {
    cluster.points.push_back({0.0, 0.0});
    cluster.parent.push_back(-1);
  }
  return tu;
}

}  // namespace hetsleep
