#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsleep {

/// Raised when an argument lies outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a series or iterative scheme fails to reach its tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by hyper_3f2 when |x| is beyond the direct-series threshold and no
/// parameter reduction applies. Callers switch to a quadrature route.
class SeriesOutOfRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an inverse DFT leaves a non-negligible imaginary part.
class ResidualImaginary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncation control shared by the hypergeometric series.
struct SeriesControl {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  int max_terms = 10000;

  void validate() const;
};

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double reg_upper_gamma_q(double a, double x);

/// Gauss hypergeometric 2F1(a, b; c; x) for x <= 1.
///
/// Negative arguments go through the Pfaff transformation, arguments in
/// (0.9, 1) through the 1 - x connection formula when c - a - b is not an
/// integer. Parameter coincidences (a == c, terminating series) are reduced
/// exactly before any series is summed.
double gauss_2f1(double a, double b, double c, double x, const SeriesControl& ctl = {});

/// 3F2(a1, a2, a3; b1, b2; x).
///
/// If an upper parameter equals a lower one the function collapses to 2F1 and
/// inherits its transformations. Otherwise the direct series is used for
/// |x| < arg_threshold and SeriesOutOfRange is thrown beyond it.
double hyper_3f2(double a1, double a2, double a3, double b1, double b2, double x,
                 const SeriesControl& ctl = {}, double arg_threshold = 0.95);

/// J_k(x) = 3F2(k + 1/2, k - nu, k + m; k + 1, k + 1 - nu; x), the family that
/// carries the interference Laplace transforms and their derivatives.
double cal_j(int k, double nu, double m, double x, const SeriesControl& ctl = {},
             double arg_threshold = 0.95);

/// J_k(x) - 1 without cancellation for small |x|.
double cal_j_minus_one(int k, double nu, double m, double x, const SeriesControl& ctl = {},
                       double arg_threshold = 0.95);

/// ||exp(C)||_1 for the lower-triangular Toeplitz matrix C with the given
/// first column (C[i][j] = first_col[i - j] for i >= j). 1 <= size <= 64.
double toeplitz_lower_expm_norm1(std::span<const double> first_col);

/// p[n] = (1/N) sum_k values[k] exp(-2 pi i k n / N).
///
/// With values[k] = G(exp(2 pi i k / N)) for a PGF G this recovers the PMF
/// (aliased modulo N). Imaginary residues above 1e-8 * max|values| throw
/// ResidualImaginary.
std::vector<double> inverse_dft_real(std::span<const std::complex<double>> values);

double nakagami_pdf(double m, double omega, double r);
double nakagami_ccdf(double m, double omega, double r);

}  // namespace hetsleep
