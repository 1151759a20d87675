#include "hetsleep/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hetsleep/specfun.hpp"

namespace hetsleep {

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol, unsigned max_depth) {
  if (a == b) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &err, &l1);
  if (!std::isfinite(v)) throw NonConvergence("integrate: non-finite result");
  if (err > std::max(rel_tol * l1, abs_tol) * 10.0 && err > 1e-14 * std::abs(b - a)) {
    std::ostringstream msg;
    msg << "integrate: error estimate " << err << " above tolerance on [" << a << ", " << b << "]";
    throw NonConvergence(msg.str());
  }
  return v;
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breaks, double rel_tol, double abs_tol) {
  std::vector<double> pts{a};
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate(f, pts[i], pts[i + 1], rel_tol, abs_tol);
  return total;
}

namespace {

template <unsigned N>
void fill_rule(std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& ab = G::abscissa();
  const auto& wt = G::weights();
  // boost stores the non-negative half; zero is first for odd N only.
  for (std::size_t i = 0; i < ab.size(); ++i) {
    if (ab[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(wt[i]);
    } else {
      x.push_back(-ab[i]);
      w.push_back(wt[i]);
      x.push_back(ab[i]);
      w.push_back(wt[i]);
    }
  }
}

const QuadNodes& reference_rule(int order) {
  static const auto make = [](int n) {
    QuadNodes q;
    switch (n) {
      case 8: fill_rule<8>(q.x, q.w); break;
      case 16: fill_rule<16>(q.x, q.w); break;
      case 24: fill_rule<24>(q.x, q.w); break;
      case 32: fill_rule<32>(q.x, q.w); break;
      case 48: fill_rule<48>(q.x, q.w); break;
      case 64: fill_rule<64>(q.x, q.w); break;
      default: throw DomainError("gauss_legendre: unsupported order");
    }
    std::vector<std::size_t> idx(q.x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto l, auto r) { return q.x[l] < q.x[r]; });
    QuadNodes sorted;
    for (auto i : idx) {
      sorted.x.push_back(q.x[i]);
      sorted.w.push_back(q.w[i]);
    }
    return sorted;
  };
  static const QuadNodes r8 = make(8), r16 = make(16), r24 = make(24), r32 = make(32),
                         r48 = make(48), r64 = make(64);
  switch (order) {
    case 8: return r8;
    case 16: return r16;
    case 24: return r24;
    case 32: return r32;
    case 48: return r48;
    case 64: return r64;
    default: throw DomainError("gauss_legendre: unsupported order");
  }
}

}  // namespace

QuadNodes gauss_legendre(double a, double b, int order) {
  const auto& ref = reference_rule(order);
  QuadNodes q;
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (b + a);
  q.x.reserve(ref.x.size());
  q.w.reserve(ref.x.size());
  for (std::size_t i = 0; i < ref.x.size(); ++i) {
    q.x.push_back(c + h * ref.x[i]);
    q.w.push_back(h * ref.w[i]);
  }
  return q;
}

QuadNodes composite_gauss_legendre(double a, double b, std::span<const double> breaks,
                                   double max_panel, int order) {
  if (!(max_panel > 0.0)) throw DomainError("composite_gauss_legendre: max_panel must be > 0");
  std::vector<double> pts{a};
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  QuadNodes out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = pts[i + 1] - pts[i];
    if (len <= 0.0) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(len / max_panel)));
    for (int p = 0; p < panels; ++p) {
      const double lo = pts[i] + len * p / panels;
      const double hi = pts[i] + len * (p + 1) / panels;
      auto q = gauss_legendre(lo, hi, order);
      out.x.insert(out.x.end(), q.x.begin(), q.x.end());
      out.w.insert(out.w.end(), q.w.begin(), q.w.end());
    }
  }
  return out;
}

}  // namespace hetsleep
