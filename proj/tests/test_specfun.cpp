#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hetsleep/quadrature.hpp"
#include "hetsleep/specfun.hpp"

using namespace hetsleep;

namespace {

// Direct 3F2 series in long double, for |x| well inside the unit disk.
double series_3f2(double a1, double a2, double a3, double b1, double b2, double x) {
  long double term = 1.0L, sum = 1.0L;
  for (int n = 0; n < 5000; ++n) {
    term *= (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1.0L)) * x;
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("regularized upper gamma matches the finite sum for integer shape") {
  // Q(n, x) = exp(-x) sum_{k<n} x^k / k!
  for (int n : {1, 2, 3, 5}) {
    for (double x : {0.1, 1.0, 2.0, 7.5}) {
      double s = 0.0, t = 1.0;
      for (int k = 0; k < n; ++k) {
        s += t;
        t *= x / (k + 1);
      }
      CHECK(reg_upper_gamma_q(n, x) == doctest::Approx(std::exp(-x) * s).epsilon(1e-13));
    }
  }
  CHECK(reg_upper_gamma_q(3.0, 2.0) == doctest::Approx(0.6766764161830635).epsilon(1e-14));
  CHECK(reg_upper_gamma_q(2.5, 0.0) == 1.0);
  CHECK_THROWS_AS(reg_upper_gamma_q(0.0, 1.0), DomainError);
}

TEST_CASE("2F1 against elementary closed forms") {
  for (double x : {-9.0, -3.0, -0.5, 0.2, 0.5, 0.93, 0.99}) {
    CHECK(gauss_2f1(1.0, 1.0, 2.0, x) == doctest::Approx(-std::log1p(-x) / x).epsilon(1e-11));
    CHECK(gauss_2f1(0.7, 1.3, 1.3, x) == doctest::Approx(std::pow(1.0 - x, -0.7)).epsilon(1e-11));
    CHECK(gauss_2f1(0.5, -0.5, 0.5, x) == doctest::Approx(std::sqrt(1.0 - x)).epsilon(1e-11));
  }
  for (double y : {0.1, 0.5, 0.9}) {
    CHECK(gauss_2f1(0.5, 0.5, 1.5, y * y) == doctest::Approx(std::asin(y) / y).epsilon(1e-11));
  }
  CHECK(gauss_2f1(1.0, 1.0, 2.0, 0.5) == doctest::Approx(1.3862943611198906).epsilon(1e-12));
  CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, 2.0, 1.5), DomainError);
  CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, -2.0, 0.1), DomainError);
}

TEST_CASE("2F1 terminating series equals its polynomial") {
  // 2F1(-3, b; c; x) = sum_{n=0}^3 (-3)_n (b)_n / ((c)_n n!) x^n
  const double b = 2.0, c = 1.5;
  for (double x : {-4.0, -1.0, 0.3, 0.97}) {
    double term = 1.0, s = 1.0;
    for (int n = 0; n < 3; ++n) {
      term *= (-3.0 + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
      s += term;
    }
    CHECK(gauss_2f1(-3.0, b, c, x) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("3F2 direct series and parameter collapse") {
  for (double x : {-0.9, -0.4, 0.3, 0.8}) {
    CHECK(hyper_3f2(0.5, 0.3, 1.7, 1.2, 2.5, x) == doctest::Approx(series_3f2(0.5, 0.3, 1.7, 1.2, 2.5, x)).epsilon(1e-11));
    CHECK(hyper_3f2(0.5, 1.5, 2.0, 1.5, 3.0, x) == doctest::Approx(gauss_2f1(0.5, 2.0, 3.0, x)).epsilon(1e-12));
  }
  // collapsed form inherits the Pfaff route far outside the unit disk
  CHECK(hyper_3f2(0.5, 1.5, 2.0, 1.5, 3.0, -20.0) == doctest::Approx(gauss_2f1(0.5, 2.0, 3.0, -20.0)).epsilon(1e-12));
  CHECK_THROWS_AS(hyper_3f2(0.5, 0.3, 1.7, 1.2, 2.5, -2.0), SeriesOutOfRange);
}

TEST_CASE("cal_j_minus_one avoids cancellation and matches cal_j - 1") {
  for (int k : {0, 1, 2}) {
    for (double x : {-0.9, -0.3, 0.4}) {
      CHECK(cal_j_minus_one(k, 0.5, 3.0, x) == doctest::Approx(cal_j(k, 0.5, 3.0, x) - 1.0).epsilon(1e-10));
    }
    // first-order term: (k+1/2)(k-nu)(k+m) / ((k+1)(k+1-nu)) x
    const double x = 1e-9, nu = 0.5, m = 3.0;
    const double lead = (k + 0.5) * (k - nu) * (k + m) / ((k + 1.0) * (k + 1.0 - nu)) * x;
    CHECK(cal_j_minus_one(k, nu, m, x) == doctest::Approx(lead).epsilon(1e-8));
  }
  CHECK(cal_j_minus_one(0, 0.5, 1.0, 0.0) == 0.0);
}

TEST_CASE("Toeplitz exponential norm") {
  const std::vector<double> one{-0.7};
  CHECK(toeplitz_lower_expm_norm1(one) == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));
  // [[a, 0], [b, a]] -> exp = e^a [[1, 0], [b, 1]]
  const std::vector<double> two{-1.2, 0.4};
  CHECK(toeplitz_lower_expm_norm1(two) == doctest::Approx(std::exp(-1.2) * 1.4).epsilon(1e-14));
  // 3x3: exp = e^a (I + N + N^2/2), first column e^a (1, b, c + b^2/2)
  const std::vector<double> three{-0.5, 0.3, 0.2};
  CHECK(toeplitz_lower_expm_norm1(three) ==
        doctest::Approx(std::exp(-0.5) * (1.0 + 0.3 + 0.2 + 0.045)).epsilon(1e-14));
  CHECK_THROWS_AS(toeplitz_lower_expm_norm1(std::vector<double>{}), DomainError);
}

TEST_CASE("inverse DFT recovers a Poisson PMF from its PGF") {
  const int n = 64;
  const double lam = 6.0;
  std::vector<std::complex<double>> v(n);
  for (int k = 0; k < n; ++k) {
    const std::complex<double> th = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    v[k] = std::exp(lam * (th - 1.0));
  }
  const auto p = inverse_dft_real(v);
  REQUIRE(p.size() == static_cast<std::size_t>(n));
  double pk = std::exp(-lam);
  for (int k = 0; k < 25; ++k) {
    CHECK(p[k] == doctest::Approx(pk).epsilon(1e-10));
    pk *= lam / (k + 1);
  }
  std::vector<std::complex<double>> bad(n, std::complex<double>(0.0, 1.0));
  CHECK_THROWS_AS(inverse_dft_real(bad), ResidualImaginary);
}

TEST_CASE("Nakagami law") {
  for (double m : {1.0, 3.575}) {
    const double omega = 100.0;
    const double mass = integrate([&](double r) { return nakagami_pdf(m, omega, r); }, 0.0, 200.0, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    for (double r : {2.0, 8.0, 15.0}) {
      const double tail = integrate([&](double t) { return nakagami_pdf(m, omega, t); }, r, 200.0, 1e-12);
      CHECK(nakagami_ccdf(m, omega, r) == doctest::Approx(tail).epsilon(1e-9));
    }
  }
  // m = 1 is Rayleigh: ccdf = exp(-r^2 / omega)
  CHECK(nakagami_ccdf(1.0, 4.0, 3.0) == doctest::Approx(std::exp(-9.0 / 4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(nakagami_pdf(0.2, 1.0, 1.0), DomainError);
}
