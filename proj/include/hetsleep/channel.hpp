#pragma once

#include <vector>

#include "hetsleep/pointproc.hpp"
#include "hetsleep/scenario.hpp"

namespace hetsleep {

/// Array pattern of an M-element half-wavelength ULA, sin^2(pi M x) / (M sin(pi x))^2.
double kernel_actual(double x, int antennas);

/// cos^2(pi M x / 2) on |x| <= 1/M, zero elsewhere.
double kernel_cosine(double x, int antennas);

double kernel(Kernel k, double x, int antennas);

enum class LinkRole { serving, interfering };

/// Gamma(m, 1/m) power fading draw.
double sample_fading(double m, Rng& rng);

/// Beamforming-plus-fading gain: M |rho|^2 for the serving link,
/// M |rho|^2 G(u / 2) with u ~ U[-1, 1] for an interferer.
double sample_link_gain(LinkRole role, int antennas, double m, Kernel k, Rng& rng);

struct Interferer {
  double distance = 0.0;
  double power_w = 0.0;  // transmit power
  double gain = 0.0;     // from sample_link_gain(interfering)
};

/// Downlink SINR at the origin. Links beyond r_max carry no power; a serving
/// link beyond r_max yields 0.
double sinr_at_typical(double serving_distance, double serving_power_w, double serving_gain,
                       const std::vector<Interferer>& interferers, const ChannelParams& ch,
                       double r_max);

}  // namespace hetsleep
