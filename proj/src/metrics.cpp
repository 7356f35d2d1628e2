#include "hdrtrain/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

#include "hdrtrain/error.hpp"

namespace hdrtrain {
namespace {

std::vector<double> pu21_luma(const LinearImage& img, const DisplayModel& display) {
  const EncodedImage enc = encode_image(img, EncodingKind::pu21(), display);
  std::vector<double> luma(static_cast<std::size_t>(img.width()) * img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      luma[static_cast<std::size_t>(y) * img.width() + x] =
          bt709_luminance(enc.at(x, y, 0), enc.at(x, y, 1), enc.at(x, y, 2));
    }
  }
  return luma;
}

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(size);
  const int r = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - r;
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable "valid" correlation: output is (w - k + 1) x (h - k + 1).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * src[static_cast<std::size_t>(y) * w + x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

}  // namespace

std::string_view metric_name(Metric m) {
  return m == Metric::PuPsnr ? "PU-PSNR" : "PU-SSIM";
}

Metric parse_metric(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (n == "pu-psnr" || n == "psnr") return Metric::PuPsnr;
  if (n == "pu-ssim" || n == "ssim") return Metric::PuSsim;
  throw ContractError("unknown metric '" + std::string(name) + "'");
}

double pu_psnr(const LinearImage& test, const LinearImage& ref, const DisplayModel& display) {
  if (!test.pixels().same_shape(ref.pixels())) {
    throw ContractError("pu_psnr: image shapes differ");
  }
  const EncodedImage a = encode_image(test, EncodingKind::pu21(), display);
  const EncodedImage b = encode_image(ref, EncodingKind::pu21(), display);
  auto va = a.values();
  auto vb = b.values();
  double sse = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = static_cast<double>(va[i]) - static_cast<double>(vb[i]);
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(va.size());
  if (mse == 0.0) return kPsnrCapDb;
  return std::min(10.0 * std::log10(1.0 / mse), kPsnrCapDb);
}

double pu_ssim(const LinearImage& test, const LinearImage& ref, const DisplayModel& display,
               const SsimOptions& options) {
  if (!test.pixels().same_shape(ref.pixels())) {
    throw ContractError("pu_ssim: image shapes differ");
  }
  if (options.window < 1 || options.window % 2 == 0 || !(options.sigma > 0.0)) {
    throw ContractError("pu_ssim: window must be odd and sigma positive");
  }
  const int w = test.width();
  const int h = test.height();
  if (w < options.window || h < options.window) {
    throw ContractError("pu_ssim: image smaller than the " + std::to_string(options.window) +
                        "x" + std::to_string(options.window) + " window");
  }

  const std::vector<double> x = pu21_luma(test, display);
  const std::vector<double> y = pu21_luma(ref, display);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto k = gaussian_window(options.window, options.sigma);
  const auto mx = filter_valid(x, w, h, k);
  const auto my = filter_valid(y, w, h, k);
  const auto sxx = filter_valid(xx, w, h, k);
  const auto syy = filter_valid(yy, w, h, k);
  const auto sxy = filter_valid(xy, w, h, k);

  const double c1 = std::pow(0.01 * options.dynamic_range, 2);
  const double c2 = std::pow(0.03 * options.dynamic_range, 2);
  double sum = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cxy = sxy[i] - mx[i] * my[i];
    const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * cxy + c2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
    sum += num / den;
  }
  return sum / static_cast<double>(mx.size());
}

double compute_metric(Metric m, const LinearImage& test, const LinearImage& ref,
                      const DisplayModel& display) {
  return m == Metric::PuPsnr ? pu_psnr(test, ref, display) : pu_ssim(test, ref, display);
}

}  // namespace hdrtrain
