#include "hdrtrain/degrade.hpp"

#include <algorithm>
#include <cmath>

#include "hdrtrain/error.hpp"
#include "hdrtrain/random.hpp"

namespace hdrtrain {

void NoiseParams::validate() const {
  if (!(photon_gain >= 0.0) || !(readout_std >= 0.0)) {
    throw ContractError("noise parameters must be non-negative");
  }
  if (photon_gain == 0.0 && readout_std == 0.0) {
    throw ContractError("noise parameters are both zero");
  }
}

int BlurParams::radius() const {
  return kernel_radius >= 0 ? kernel_radius : static_cast<int>(std::ceil(3.0 * sigma));
}

void BlurParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ContractError("blur sigma must be positive");
  }
}

LinearImage add_camera_noise(const LinearImage& img, const NoiseParams& params) {
  params.validate();
  check_linear(img);
  const CounterRng rng(params.seed);
  const double readout_var = params.readout_std * params.readout_std;
  LinearImage out(img.width(), img.height());
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double x = src[i];
    const double sd = std::sqrt(params.photon_gain * x + readout_var);
    const double y = x + sd * rng.normal(i);
    dst[i] = static_cast<float>(params.clamp_negative ? std::max(y, 0.0) : y);
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma, int radius) {
  std::vector<double> k(2 * static_cast<std::size_t>(radius) + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-static_cast<double>(i) * i / (2.0 * sigma * sigma));
    k[i + radius] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

LinearImage gaussian_blur(const LinearImage& img, const BlurParams& params) {
  params.validate();
  const int r = params.radius();
  const auto k = gaussian_kernel(params.sigma, r);
  const int w = img.width();
  const int h = img.height();

  std::vector<double> tmp(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < kChannels; ++c) {
        double s = 0.0;
        for (int i = -r; i <= r; ++i) s += k[i + r] * img.at(reflect_index(x + i, w), y, c);
        tmp[(static_cast<std::size_t>(y) * w + x) * kChannels + c] = s;
      }
    }
  }
  LinearImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < kChannels; ++c) {
        double s = 0.0;
        for (int i = -r; i <= r; ++i) {
          s += k[i + r] * tmp[(static_cast<std::size_t>(reflect_index(y + i, h)) * w + x) * kChannels + c];
        }
        out.at(x, y, c) = static_cast<float>(s);
      }
    }
  }
  return out;
}

LinearImage downsample_bilinear(const LinearImage& img, int factor) {
  if (factor < 1) {
    throw ContractError("downsampling factor must be positive");
  }
  if (img.width() % factor != 0 || img.height() % factor != 0) {
    throw ContractError("image " + std::to_string(img.width()) + "x" +
                        std::to_string(img.height()) + " not divisible by factor " +
                        std::to_string(factor));
  }
  const int ow = img.width() / factor;
  const int oh = img.height() / factor;
  const double norm = 1.0 / (static_cast<double>(factor) * factor);
  LinearImage out(ow, oh);
  for (int j = 0; j < oh; ++j) {
    for (int i = 0; i < ow; ++i) {
      for (int c = 0; c < kChannels; ++c) {
        double s = 0.0;
        for (int dy = 0; dy < factor; ++dy) {
          for (int dx = 0; dx < factor; ++dx) s += img.at(i * factor + dx, j * factor + dy, c);
        }
        out.at(i, j, c) = static_cast<float>(s * norm);
      }
    }
  }
  return out;
}

}  // namespace hdrtrain
