#include "hetsleep/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>
#include <fftw3.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace hetsleep {

namespace {

bool is_nonpositive_integer(double v) { return v <= 0.0 && std::nearbyint(v) == v; }

bool nearly_equal(double x, double y) {
  return std::abs(x - y) <= 1e-14 * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

bool near_integer(double v, double tol = 1e-9) { return std::abs(v - std::nearbyint(v)) < tol; }

// 1 / Gamma(x), zero at the poles.
double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Sum_{n >= first} prod(a)_n / prod(b)_n x^n / n!.
template <std::size_t P, std::size_t Q>
double pfq_series(const double (&a)[P], const double (&b)[Q], double x, const SeriesControl& ctl,
                  int first) {
  Kahan acc;
  double term = 1.0;
  if (first == 0) acc.add(term);
  int small_run = 0;
  for (int n = 0; n < ctl.max_terms; ++n) {
    double ratio = x / (n + 1.0);
    for (double ai : a) ratio *= (ai + n);
    for (double bi : b) ratio /= (bi + n);
    term *= ratio;
    if (term == 0.0) return acc.sum;
    acc.add(term);
    // Geometric bound on the remaining tail once terms decay.
    const double r = std::abs(ratio);
    const double tail = r < 1.0 ? std::abs(term) * r / (1.0 - r) : std::abs(term);
    if (std::max(std::abs(term), tail) <= ctl.rel_tol * std::abs(acc.sum) + ctl.abs_tol) {
      // Require decaying terms so an early small term near a sign change
      // does not stop the sum.
      if (std::abs(ratio) < 1.0 && ++small_run >= 2) return acc.sum;
    } else {
      small_run = 0;
    }
  }
  std::ostringstream msg;
  msg << "hypergeometric series did not converge in " << ctl.max_terms << " terms (x=" << x << ")";
  throw NonConvergence(msg.str());
}

double series_2f1(double a, double b, double c, double x, const SeriesControl& ctl, int first = 0) {
  const double up[2] = {a, b};
  const double lo[1] = {c};
  return pfq_series(up, lo, x, ctl, first);
}

double gauss_2f1_impl(double a, double b, double c, double x, const SeriesControl& ctl, int depth);

double connection_1mx(double a, double b, double c, double x, const SeriesControl& ctl, int depth) {
  const double y = 1.0 - x;
  const double s = c - a - b;
  const double t1 = std::tgamma(c) * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
  const double t2 = std::tgamma(c) * std::tgamma(-s) * rgamma(a) * rgamma(b);
  double v = 0.0;
  if (t1 != 0.0) v += t1 * gauss_2f1_impl(a, b, 1.0 - s, y, ctl, depth + 1);
  if (t2 != 0.0) v += t2 * std::pow(y, s) * gauss_2f1_impl(c - a, c - b, 1.0 + s, y, ctl, depth + 1);
  return v;
}

double gauss_2f1_impl(double a, double b, double c, double x, const SeriesControl& ctl, int depth) {
  if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a non-positive integer");
  if (!std::isfinite(x)) throw DomainError("gauss_2f1: non-finite argument");
  if (x == 0.0) return 1.0;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return series_2f1(a, b, c, x, ctl);
  if (x > 1.0) throw DomainError("gauss_2f1: x > 1 is outside the supported range");
  if (nearly_equal(a, c)) return std::pow(1.0 - x, -b);
  if (nearly_equal(b, c)) return std::pow(1.0 - x, -a);
  if (x == 1.0) {
    if (c - a - b <= 0.0) throw DomainError("gauss_2f1: divergent at x = 1");
    return std::tgamma(c) * std::tgamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
  }
  if (depth > 3) return series_2f1(a, b, c, x, ctl);
  if (x < 0.0) {
    const double z = x / (x - 1.0);
    // Pfaff: pull out (1-x)^{-a} or (1-x)^{-b}; prefer a terminating inner
    // series, otherwise the variant whose terms decay faster in n.
    const bool term_a = is_nonpositive_integer(c - b);
    const bool term_b = is_nonpositive_integer(c - a);
    const bool use_a = term_a || (!term_b && a <= b);
    if (use_a) return std::pow(1.0 - x, -a) * gauss_2f1_impl(a, c - b, c, z, ctl, depth + 1);
    return std::pow(1.0 - x, -b) * gauss_2f1_impl(c - a, b, c, z, ctl, depth + 1);
  }
  if (x > 0.9 && !near_integer(c - a - b)) return connection_1mx(a, b, c, x, ctl, depth);
  return series_2f1(a, b, c, x, ctl);
}

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("SeriesControl: rel_tol must be > 0");
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
}

double reg_upper_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("reg_upper_gamma_q: a must be > 0");
  if (!(x >= 0.0)) throw DomainError("reg_upper_gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(a, x);
}

double gauss_2f1(double a, double b, double c, double x, const SeriesControl& ctl) {
  ctl.validate();
  return gauss_2f1_impl(a, b, c, x, ctl, 0);
}

double hyper_3f2(double a1, double a2, double a3, double b1, double b2, double x,
                 const SeriesControl& ctl, double arg_threshold) {
  ctl.validate();
  if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2))
    throw DomainError("hyper_3f2: lower parameter is a non-positive integer");
  if (x == 0.0) return 1.0;
  const double up[3] = {a1, a2, a3};
  const double lo[2] = {b1, b2};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (nearly_equal(up[i], lo[j])) {
        const double r0 = up[(i + 1) % 3];
        const double r1 = up[(i + 2) % 3];
        return gauss_2f1(r0, r1, lo[1 - j], x, ctl);
      }
    }
  }
  if (is_nonpositive_integer(a1) || is_nonpositive_integer(a2) || is_nonpositive_integer(a3))
    return pfq_series(up, lo, x, ctl, 0);
  if (std::abs(x) >= arg_threshold) {
    std::ostringstream msg;
    msg << "hyper_3f2: |x| = " << std::abs(x) << " beyond series threshold " << arg_threshold;
    throw SeriesOutOfRange(msg.str());
  }
  return pfq_series(up, lo, x, ctl, 0);
}

double cal_j(int k, double nu, double m, double x, const SeriesControl& ctl, double arg_threshold) {
  if (k < 0) throw DomainError("cal_j: k must be >= 0");
  return hyper_3f2(k + 0.5, k - nu, k + m, k + 1.0, k + 1.0 - nu, x, ctl, arg_threshold);
}

double cal_j_minus_one(int k, double nu, double m, double x, const SeriesControl& ctl,
                       double arg_threshold) {
  if (k < 0) throw DomainError("cal_j_minus_one: k must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::abs(x) < 0.5) {
    ctl.validate();
    const double up[3] = {k + 0.5, k - nu, k + m};
    const double lo[2] = {k + 1.0, k + 1.0 - nu};
    return pfq_series(up, lo, x, ctl, 1);
  }
  return cal_j(k, nu, m, x, ctl, arg_threshold) - 1.0;
}

double toeplitz_lower_expm_norm1(std::span<const double> first_col) {
  const auto m = static_cast<Eigen::Index>(first_col.size());
  if (m == 0) throw DomainError("toeplitz_lower_expm_norm1: empty first column");
  if (m > 64) throw DomainError("toeplitz_lower_expm_norm1: size above 64");
  if (m == 1) return std::exp(first_col[0]);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) c(i, j) = first_col[static_cast<std::size_t>(i - j)];
  const Eigen::MatrixXd e = c.exp();
  return e.cwiseAbs().colwise().sum().maxCoeff();
}

std::vector<double> inverse_dft_real(std::span<const std::complex<double>> values) {
  const int n = static_cast<int>(values.size());
  if (n < 1) throw DomainError("inverse_dft_real: empty input");
  std::vector<std::complex<double>> in(values.begin(), values.end());
  std::vector<std::complex<double>> out(values.size());
  auto* pin = reinterpret_cast<fftw_complex*>(in.data());
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());

  // fftw's planner is not thread-safe; execution is.
  static std::mutex planner_mutex;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, pin, pout, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }

  double max_abs = 0.0;
  for (const auto& v : values) max_abs = std::max(max_abs, std::abs(v));
  std::vector<double> result(values.size());
  double max_imag = 0.0;
  for (int i = 0; i < n; ++i) {
    result[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)].real() / n;
    max_imag = std::max(max_imag, std::abs(out[static_cast<std::size_t>(i)].imag() / n));
  }
  if (max_imag > 1e-8 * max_abs) {
    std::ostringstream msg;
    msg << "inverse_dft_real: imaginary residue " << max_imag << " exceeds 1e-8 * " << max_abs;
    throw ResidualImaginary(msg.str());
  }
  return result;
}

namespace {
void check_nakagami(double m, double omega, double r) {
  if (!(m > 0.5)) throw DomainError("nakagami: shape m must be > 0.5");
  if (!(omega > 0.0)) throw DomainError("nakagami: omega must be > 0");
  if (!(r >= 0.0)) throw DomainError("nakagami: r must be >= 0");
}
}  // namespace

double nakagami_pdf(double m, double omega, double r) {
  check_nakagami(m, omega, r);
  if (r == 0.0) return 0.0;
  const double log_f = std::log(2.0) + m * std::log(m) - std::lgamma(m) - m * std::log(omega) +
                       (2.0 * m - 1.0) * std::log(r) - m * r * r / omega;
  return std::exp(log_f);
}

double nakagami_ccdf(double m, double omega, double r) {
  check_nakagami(m, omega, r);
  return reg_upper_gamma_q(m, m * r * r / omega);
}

}  // namespace hetsleep
