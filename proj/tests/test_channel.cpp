#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hetsleep/channel.hpp"
#include "hetsleep/quadrature.hpp"

using namespace hetsleep;

TEST_CASE("beam kernels") {
  for (int m : {8, 64}) {
    CHECK(kernel_cosine(0.0, m) == doctest::Approx(1.0));
    CHECK(kernel_actual(0.0, m) == doctest::Approx(1.0));
    CHECK(kernel_cosine(1.5 / m, m) == 0.0);
    CHECK(kernel_actual(1.0 / m, m) == doctest::Approx(0.0).epsilon(1e-12));
    // int over |x| <= 1/M of cos^2(pi M x / 2) is 1/M
    const double c = integrate([&](double x) { return kernel_cosine(x, m); }, -1.0 / m, 1.0 / m, 1e-12);
    CHECK(c == doctest::Approx(1.0 / m).epsilon(1e-10));
    // Fejer kernel over a full period integrates to 2/M
    const std::vector<double> br{0.0};
    const double a = integrate_split([&](double x) { return kernel_actual(x, m); }, -1.0, 1.0, br, 1e-11);
    CHECK(a == doctest::Approx(2.0 / m).epsilon(1e-8));
  }
}

TEST_CASE("Gamma fading moments") {
  Rng rng(9);
  for (double m : {1.0, 3.0}) {
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double h = sample_fading(m, rng);
      s += h;
      s2 += h * h;
    }
    CHECK(s / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s2 / n - (s / n) * (s / n) == doctest::Approx(1.0 / m).epsilon(0.03));
  }
}

TEST_CASE("interferer gain averages M times the kernel mean") {
  Rng rng(1);
  const int m = 16, n = 200000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += sample_link_gain(LinkRole::interfering, m, 1.0, Kernel::cosine, rng);
  // u ~ U[-1, 1], G(u/2) nonzero on |u| <= 2/M with mean 1/M
  CHECK(s / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("SINR by hand") {
  ChannelParams ch;
  ch.alpha = 4.0;
  ch.beta = 2.0;
  ch.noise_power = 0.5;
  const std::vector<Interferer> in{{20.0, 1.0, 3.0}, {500.0, 100.0, 1.0}};
  const double sig = 2.0 * 10.0 * 4.0 * std::pow(10.0, -4.0);
  const double intf = 2.0 * 1.0 * 3.0 * std::pow(20.0, -4.0);
  CHECK(sinr_at_typical(10.0, 10.0, 4.0, in, ch, 400.0) == doctest::Approx(sig / (intf + 0.5)).epsilon(1e-14));
  CHECK(sinr_at_typical(450.0, 10.0, 4.0, in, ch, 400.0) == 0.0);
}
