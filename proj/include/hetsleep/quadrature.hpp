#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hetsleep {

/// Adaptive Gauss-Kronrod (15 point) integration of f over [a, b].
///
/// Throws NonConvergence if the error estimate stays above
/// rel_tol * |L1 norm| + abs_tol after max_depth bisections.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-300, unsigned max_depth = 18);

/// Same as integrate() but splits [a, b] at the given interior breakpoints
/// first (points outside (a, b) are ignored).
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breaks, double rel_tol = 1e-10,
                       double abs_tol = 1e-300);

/// Gauss-Legendre rule mapped onto one or more panels.
struct QuadNodes {
  std::vector<double> x;
  std::vector<double> w;
};

/// order must be one of 8, 16, 24, 32, 48, 64.
QuadNodes gauss_legendre(double a, double b, int order);

/// Composite rule: [a, b] split at breaks, each piece cut into panels of
/// width <= max_panel, order nodes per panel.
QuadNodes composite_gauss_legendre(double a, double b, std::span<const double> breaks,
                                   double max_panel, int order);

}  // namespace hetsleep
