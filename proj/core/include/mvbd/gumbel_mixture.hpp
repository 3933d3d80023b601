#pragma once

#include <array>
#include <cstdint>

namespace mvbd {

// Ten-component Gaussian mixture approximation of the standard Gumbel
// density exp(-u - e^-u), used to make the utility-race augmented likelihood
// Gaussian. The constants are external data transcribed from the published
// ten-component table; weights are renormalized to sum to 1 exactly, and a
// sup-norm fidelity test guards the transcription.
struct GumbelMixture {
  static constexpr int kComponents = 10;

  static const std::array<double, kComponents>& weights();    // normalized
  static const std::array<double, kComponents>& means();      // xi_c
  static const std::array<double, kComponents>& variances();  // s_c^2

  // Mixture density at u.
  static double density(double u);

  // Reference density exp(-u - e^-u).
  static double gumbel_density(double u);

  // FNV-1a over the raw transcribed constants; frozen in a unit test so an
  // accidental edit of the table is caught.
  static std::uint64_t checksum();
};

}  // namespace mvbd
