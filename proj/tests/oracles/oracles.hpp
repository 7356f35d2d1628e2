#pragma once

// Independent reference implementations used only by tests. They are written
// from the defining formulas with no calls into the library's code paths.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace oracle {

inline double mulaw(double l, double mu) { return std::log(1.0 + mu * l) / std::log(1.0 + mu); }

inline double pu21(double lum) {
  const double a = 0.001908, b = 0.0078;
  const double x = std::log(lum) / std::log(2.0) - std::log(0.005) / std::log(2.0);
  return a * x * x + b * x;
}

inline double pq(double lum) {
  const double m1 = 0.1593017578125, m2 = 78.84375;
  const double c1 = 0.8359375, c2 = 18.8515625, c3 = 18.6875;
  const double y = std::pow(lum / 10000.0, m1);
  return std::pow((c1 + c2 * y) / (1.0 + c3 * y), m2);
}

// Clamp-then-PU21 of a relative value through a display with the given
// black level and peak.
inline double pu21_relative(double rel, double black = 0.005, double peak = 4000.0) {
  return pu21(std::min(std::max(rel * peak, black), peak));
}

// Images are interleaved RGB, row-major, top row first.
struct Img {
  int w = 0, h = 0;
  std::vector<double> v;
  double at(int x, int y, int c) const { return v[(static_cast<size_t>(y) * w + x) * 3 + c]; }
};

inline double psnr_pu(const Img& a, const Img& b) {
  double sse = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) {
    const double d = pu21_relative(a.v[i]) - pu21_relative(b.v[i]);
    sse += d * d;
  }
  const double mse = sse / a.v.size();
  if (mse == 0.0) return 120.0;
  return std::min(120.0, -10.0 * std::log10(mse));
}

// Direct per-window SSIM: every window position evaluates the weighted
// moments from scratch with the full 2-D Gaussian.
inline double ssim_pu(const Img& a, const Img& b, int win = 11, double sigma = 1.5) {
  auto luma = [](const Img& im, int x, int y) {
    return 0.2126 * pu21_relative(im.at(x, y, 0)) + 0.7152 * pu21_relative(im.at(x, y, 1)) +
           0.0722 * pu21_relative(im.at(x, y, 2));
  };
  const int r = win / 2;
  std::vector<double> g(static_cast<size_t>(win) * win);
  double gs = 0.0;
  for (int j = 0; j < win; ++j) {
    for (int i = 0; i < win; ++i) {
      const double dx = i - r, dy = j - r;
      g[j * win + i] = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
      gs += g[j * win + i];
    }
  }
  const double c1 = 0.0001, c2 = 0.0009;
  double total = 0.0;
  int count = 0;
  for (int y0 = 0; y0 + win <= a.h; ++y0) {
    for (int x0 = 0; x0 + win <= a.w; ++x0) {
      double mx = 0, my = 0;
      for (int j = 0; j < win; ++j)
        for (int i = 0; i < win; ++i) {
          const double wgt = g[j * win + i] / gs;
          mx += wgt * luma(a, x0 + i, y0 + j);
          my += wgt * luma(b, x0 + i, y0 + j);
        }
      double vx = 0, vy = 0, cxy = 0;
      for (int j = 0; j < win; ++j)
        for (int i = 0; i < win; ++i) {
          const double wgt = g[j * win + i] / gs;
          const double dx = luma(a, x0 + i, y0 + j) - mx;
          const double dy = luma(b, x0 + i, y0 + j) - my;
          vx += wgt * dx * dx;
          vy += wgt * dy * dy;
          cxy += wgt * dx * dy;
        }
      total += (2 * mx * my + c1) * (2 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / count;
}

// Mean and variance of max(0, Z) for Z ~ N(m, s^2).
inline std::pair<double, double> censored_normal_moments(double m, double s) {
  const double a = m / s;
  const double cdf = 0.5 * std::erfc(-a / std::sqrt(2.0));
  const double pdf = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
  const double mean = m * cdf + s * pdf;
  const double second = (m * m + s * s) * cdf + m * s * pdf;
  return {mean, second - mean * mean};
}

// All maximal contiguous runs [first, last] over positions 0..k-1 in which
// every pair satisfies ok(i, j); found by enumerating every interval.
template <typename Ok>
std::vector<std::pair<size_t, size_t>> maximal_runs(size_t k, Ok ok) {
  std::vector<std::pair<size_t, size_t>> valid;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i; j < k; ++j) {
      bool good = true;
      for (size_t p = i; p <= j && good; ++p)
        for (size_t q = p + 1; q <= j && good; ++q) good = ok(p, q);
      if (good) valid.emplace_back(i, j);
    }
  }
  std::vector<std::pair<size_t, size_t>> out;
  for (const auto& v : valid) {
    bool contained = false;
    for (const auto& u : valid) {
      if (u != v && u.first <= v.first && v.second <= u.second) contained = true;
    }
    if (!contained) out.push_back(v);
  }
  return out;
}

}  // namespace oracle
