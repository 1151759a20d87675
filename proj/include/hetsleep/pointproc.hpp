#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hetsleep/scenario.hpp"

namespace hetsleep {

using Rng = std::mt19937_64;

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// Square sampling region [-side/2, side/2)^2, optionally wrapped.
struct Region {
  double side = 1000.0;
  WrapMode wrap = WrapMode::toroidal;

  double half() const { return 0.5 * side; }
  double area() const { return side * side; }
  bool contains(const Point& p) const;
  /// Folds p back into the region (toroidal only; guard mode leaves it).
  Point wrap_point(Point p) const;
  /// Squared distance, using the minimum image under toroidal wrap.
  double dist2(const Point& a, const Point& b) const;
};

struct ClusteredPoints {
  std::vector<Point> points;
  std::vector<int> parent;  // index into the parent list, -1 if none
  std::vector<Point> parents;
};

/// Homogeneous PPP on the region.
std::vector<Point> sample_hppp(double intensity, const Region& region, Rng& rng);

/// Uniform point in the disk of the given radius around c.
Point uniform_in_disk(const Point& c, double radius, Rng& rng);

/// Matern cluster daughters around given parents: Poisson(mean) per parent,
/// uniform on the disk of radius r_m.
ClusteredPoints sample_mcp(const std::vector<Point>& parents, double mean_per_cluster,
                           double radius, const Region& region, Rng& rng);

/// Matern cluster process with Poisson parents. Toroidal regions wrap the
/// daughters; guard regions draw parents on the region dilated by the radius
/// and keep only daughters that land inside.
ClusteredPoints sample_mcp(double parent_intensity, double mean_per_cluster, double radius,
                           const Region& region, Rng& rng);

struct NetworkRealization {
  Region region;
  std::vector<std::vector<Point>> bs;     // per BS tier index
  std::vector<ClusteredPoints> ue;        // per UE tier index
  std::uint64_t seed = 0;
};

NetworkRealization realize_network(const Scenario& s, const Region& region, Rng& rng);

/// Typical user placed at the origin. For a category-2 tier the coupled BS
/// is appended to its tier and its index recorded in tier0_bs.
struct TypicalUser {
  std::size_t ue_tier = 0;
  std::optional<std::size_t> tier0_bs_tier;  // BS tier index of the coupled BS
  std::optional<std::size_t> tier0_bs;       // index within that tier
  std::size_t siblings = 0;
};

/// Adds the typical user's own cluster (category 1/2) to the realization:
/// the cluster center at a uniform-disk offset (category 2: with distance in
/// [r_min, r_m]) and Poisson(m̄) siblings around it. When count_typical is
/// set the typical user itself is appended to its tier's points at the origin.
TypicalUser make_typical_user(NetworkRealization& net, const Scenario& s, std::size_t ue_tier,
                              bool count_typical, Rng& rng);

}  // namespace hetsleep
