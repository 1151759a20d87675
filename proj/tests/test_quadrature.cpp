#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hetsleep/quadrature.hpp"
#include "hetsleep/specfun.hpp"

using namespace hetsleep;

TEST_CASE("adaptive integration of smooth and kinked integrands") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  const std::vector<double> br{0.3};
  // int_0^1 |x - 0.3| dx = 0.045 + 0.245
  CHECK(integrate_split([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, br) ==
        doctest::Approx(0.29).epsilon(1e-14));
  CHECK(integrate([](double x) { return x; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("adaptive integration reports failure") {
  auto step = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
  CHECK_THROWS_AS(integrate(step, 0.0, 1.0, 1e-14, 0.0, 1), NonConvergence);
}

TEST_CASE("Gauss-Legendre exactness and composite weights") {
  for (int order : {8, 16, 24, 32, 48, 64}) {
    const QuadNodes q = gauss_legendre(-1.0, 2.0, order);
    REQUIRE(q.x.size() == static_cast<std::size_t>(order));
    const int deg = 2 * order - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::pow(q.x[i], deg);
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-11));
  }
  const std::vector<double> br{0.5, 3.0, 9.0};
  const QuadNodes c = composite_gauss_legendre(0.0, 4.0, br, 1.0, 16);
  double w = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    w += c.w[i];
    m1 += c.w[i] * std::sqrt(c.x[i] > 0.5 ? c.x[i] - 0.5 : 0.5 - c.x[i]);
    CHECK(c.x[i] > 0.0);
    CHECK(c.x[i] < 4.0);
  }
  CHECK(w == doctest::Approx(4.0).epsilon(1e-14));
  // kink at the breakpoint: int_0^4 sqrt|x - 0.5| = (2/3)(0.5^1.5 + 3.5^1.5)
  CHECK(m1 == doctest::Approx(2.0 / 3.0 * (std::pow(0.5, 1.5) + std::pow(3.5, 1.5))).epsilon(1e-3));
  CHECK_THROWS_AS(gauss_legendre(0.0, 1.0, 7), DomainError);
}
