#include "mvbd/gumbel_mixture.hpp"

#include <cmath>
#include <cstring>

#include "mvbd/stats.hpp"

namespace mvbd {

namespace {

// Transcribed table: component weights, means and variances. The printed
// weights sum to 1.00015; they are normalized once below.
constexpr std::array<double, 10> kRawWeights = {
    0.00397, 0.03962, 0.16777, 0.14704, 0.12531,
    0.10149, 0.10379, 0.11593, 0.10722, 0.08801};
constexpr std::array<double, 10> kMeans = {
    5.09, 3.29, 1.82, 1.24, 0.764, 0.391, 0.0431, -0.306, -0.673, -1.06};
constexpr std::array<double, 10> kVariances = {
    4.50, 2.02, 1.10, 0.422, 0.198, 0.107, 0.0778, 0.0766, 0.0947, 0.146};

std::array<double, 10> normalized_weights() {
  double sum = 0.0;
  for (double w : kRawWeights) sum += w;
  std::array<double, 10> out{};
  for (int c = 0; c < 10; ++c) out[c] = kRawWeights[c] / sum;
  return out;
}

}  // namespace

const std::array<double, GumbelMixture::kComponents>& GumbelMixture::weights() {
  static const auto w = normalized_weights();
  return w;
}

const std::array<double, GumbelMixture::kComponents>& GumbelMixture::means() {
  return kMeans;
}

const std::array<double, GumbelMixture::kComponents>& GumbelMixture::variances() {
  return kVariances;
}

double GumbelMixture::density(double u) {
  const auto& w = weights();
  double d = 0.0;
  for (int c = 0; c < kComponents; ++c)
    d += w[c] * std::exp(log_normal_pdf(u, kMeans[c], kVariances[c]));
  return d;
}

double GumbelMixture::gumbel_density(double u) {
  return std::exp(-u - std::exp(-u));
}

std::uint64_t GumbelMixture::checksum() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto fold = [&h](const std::array<double, 10>& a) {
    for (double v : a) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    }
  };
  fold(kRawWeights);
  fold(kMeans);
  fold(kVariances);
  return h;
}

}  // namespace mvbd
