#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdrtrain/image.hpp"

namespace hdrtrain {

// Heteroscedastic Gaussian approximation of photon + readout noise:
// Var[y | x] = photon_gain * x + readout_std^2.
struct NoiseParams {
  double photon_gain = 0.01;
  double readout_std = 0.002;
  std::uint64_t seed = 0;
  // Clamping biases the moments wherever the noise is comparable to the
  // signal; disable it to sample the raw Gaussian model.
  bool clamp_negative = true;

  void validate() const;
};

struct BlurParams {
  double sigma = 8.0;
  int kernel_radius = -1;  // negative: ceil(3 * sigma)

  int radius() const;
  void validate() const;
};

// Element i receives noise from the (seed, i) stream, so the result does not
// depend on traversal order. Output is clamped to >= 0 unless
// params.clamp_negative is false.
LinearImage add_camera_noise(const LinearImage& img, const NoiseParams& params);

// Normalized 1-D Gaussian taps, length 2 * radius + 1.
std::vector<double> gaussian_kernel(double sigma, int radius);

// Separable blur with half-sample symmetric boundary extension.
LinearImage gaussian_blur(const LinearImage& img, const BlurParams& params);

// Bilinear sample at ((i + 0.5) f - 0.5) of the source prefiltered with a
// width-f box. For integer f this is exactly the mean of each f x f block.
LinearImage downsample_bilinear(const LinearImage& img, int factor = 4);

// Reflects an out-of-range coordinate into [0, n).
int reflect_index(int i, int n);

}  // namespace hdrtrain
