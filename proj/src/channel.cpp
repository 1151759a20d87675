#include "hetsleep/channel.hpp"

#include <cmath>
#include <numbers>

namespace hetsleep {

double kernel_actual(double x, int antennas) {
  const double pi = std::numbers::pi;
  const double s = std::sin(pi * x);
  if (std::abs(s) < 1e-12) return 1.0;
  const double n = std::sin(pi * antennas * x);
  return (n * n) / (static_cast<double>(antennas) * antennas * s * s);
}

double kernel_cosine(double x, int antennas) {
  const double ax = std::abs(x);
  if (ax > 1.0 / antennas) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * antennas * ax);
  return c * c;
}

double kernel(Kernel k, double x, int antennas) {
  return k == Kernel::cosine ? kernel_cosine(x, antennas) : kernel_actual(x, antennas);
}

double sample_fading(double m, Rng& rng) {
  std::gamma_distribution<double> g(m, 1.0 / m);
  return g(rng);
}

double sample_link_gain(LinkRole role, int antennas, double m, Kernel k, Rng& rng) {
  const double h = sample_fading(m, rng);
  if (role == LinkRole::serving) return antennas * h;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return antennas * h * kernel(k, 0.5 * u(rng), antennas);
}

double sinr_at_typical(double serving_distance, double serving_power_w, double serving_gain,
                       const std::vector<Interferer>& interferers, const ChannelParams& ch,
                       double r_max) {
  if (serving_distance > r_max) return 0.0;
  double interference = 0.0;
  for (const auto& i : interferers) {
    if (i.distance > r_max) continue;
    interference += ch.beta * i.power_w * i.gain * std::pow(i.distance, -ch.alpha);
  }
  const double signal = ch.beta * serving_power_w * serving_gain * std::pow(serving_distance, -ch.alpha);
  return signal / (ch.noise_power + interference);
}

}  // namespace hetsleep
