#include <doctest.h>

#include <cmath>
#include <random>

#include "hdrtrain/degrade.hpp"
#include "hdrtrain/error.hpp"
#include "oracles/oracles.hpp"

using namespace hdrtrain;

namespace {

LinearImage random_image(int w, int h, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  LinearImage img(w, h);
  for (float& v : img.values()) v = u(gen);
  return img;
}

struct Moments {
  double mean, var;
};

Moments moments(const LinearImage& img) {
  double s = 0, ss = 0;
  for (float v : img.values()) {
    s += v;
    ss += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(img.size());
  return {s / n, (ss - s * s / n) / (n - 1)};
}

}  // namespace

TEST_CASE("readout-only noise has the configured variance") {
  // 333334 pixels x 3 channels ~ 10^6 draws.
  const LinearImage img(1000, 334, 0.5f);
  const auto m = moments(add_camera_noise(img, {0.0, 0.002, 7}));
  CHECK(m.var == doctest::Approx(4e-6).epsilon(0.05));
  const double stderr_mean = std::sqrt(4e-6 / static_cast<double>(img.size()));
  CHECK(std::abs(m.mean - 0.5) < 3 * stderr_mean);
}

TEST_CASE("photon plus readout noise tracks k x + sigma_r^2") {
  for (double x : {0.01, 0.1, 0.5}) {
    const LinearImage img(1000, 334, static_cast<float>(x));
    const NoiseParams p{0.01, 0.002, 99, false};
    const double var = p.photon_gain * x + p.readout_std * p.readout_std;
    const auto m = moments(add_camera_noise(img, p));
    CHECK(m.var == doctest::Approx(var).epsilon(0.05));
    CHECK(std::abs(m.mean - x) < 3 * std::sqrt(var / static_cast<double>(img.size())));
  }
}

TEST_CASE("clamped noise follows the censored normal") {
  for (double x : {0.01, 0.1, 0.5}) {
    const LinearImage img(1000, 334, static_cast<float>(x));
    const NoiseParams p{0.01, 0.002, 98};
    const auto [mean, var] = oracle::censored_normal_moments(x, std::sqrt(p.photon_gain * x + 4e-6));
    const auto m = moments(add_camera_noise(img, p));
    CHECK(m.mean == doctest::Approx(mean).epsilon(0.01));
    CHECK(m.var == doctest::Approx(var).epsilon(0.05));
  }
}

TEST_CASE("noise is deterministic per seed and rejects bad input") {
  const auto img = random_image(31, 17, 1);
  CHECK(add_camera_noise(img, {0.01, 0.002, 5}) == add_camera_noise(img, {0.01, 0.002, 5}));
  CHECK_FALSE(add_camera_noise(img, {0.01, 0.002, 5}) == add_camera_noise(img, {0.01, 0.002, 6}));
  CHECK_THROWS_AS(add_camera_noise(img, {0.0, 0.0, 1}), ContractError);
  CHECK_THROWS_AS(add_camera_noise(img, {-0.1, 0.002, 1}), ContractError);
  LinearImage bad = img;
  bad.at(0, 0, 0) = -1.0f;
  CHECK_THROWS_AS(add_camera_noise(bad, {0.01, 0.002, 1}), ContractError);
  const auto dark = add_camera_noise(LinearImage(20, 20, 0.0f), {0.0, 0.01, 3});
  for (float v : dark.values()) CHECK(v >= 0.0f);
}

TEST_CASE("noise of a pixel depends only on its index") {
  // A crop of the noisy image equals noise applied with the same element
  // indices, so the generator is order-free; check two separate calls agree
  // element by element on a shared prefix.
  const LinearImage a(10, 10, 0.3f);
  LinearImage b(10, 20, 0.3f);
  const auto na = add_camera_noise(a, {0.01, 0.002, 11});
  const auto nb = add_camera_noise(b, {0.01, 0.002, 11});
  for (std::size_t i = 0; i < na.size(); ++i) CHECK(na.values()[i] == nb.values()[i]);
}

TEST_CASE("Gaussian kernel") {
  const auto k = gaussian_kernel(8.0, 24);
  CHECK(k.size() == 49);
  double s = 0.0;
  for (double v : k) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(BlurParams{}.radius() == 24);
  CHECK(BlurParams{1.2, -1}.radius() == 4);
}

TEST_CASE("blur of an impulse is the sampled 2-D Gaussian") {
  LinearImage img(97, 97, 0.0f);
  for (int c = 0; c < 3; ++c) img.at(48, 48, c) = 1.0f;
  const auto out = gaussian_blur(img, {});
  // Oracle: product of two normalized 49-tap kernels, evaluated directly.
  double norm = 0.0;
  for (int i = -24; i <= 24; ++i) norm += std::exp(-i * i / 128.0);
  for (int dy : {0, 3, -10, 24}) {
    for (int dx : {0, 1, 7, -24}) {
      const double expect = std::exp(-(dx * dx + dy * dy) / 128.0) / (norm * norm);
      CHECK(out.at(48 + dx, 48 + dy, 1) == doctest::Approx(expect).epsilon(1e-6));
    }
  }
  CHECK(out.at(48, 48, 0) == doctest::Approx(1.0 / (2 * M_PI * 64)).epsilon(0.01));
  CHECK(out.at(48 + 25, 48, 0) == 0.0f);
}

TEST_CASE("blur preserves constants and is linear") {
  const LinearImage c(33, 21, 0.37f);
  const auto blurred = gaussian_blur(c, {});
  for (float v : blurred.values()) CHECK(v == 0.37f);
  const auto a = random_image(40, 30, 2);
  const auto b = random_image(40, 30, 3);
  LinearImage sum = a;
  for (std::size_t i = 0; i < sum.size(); ++i) sum.values()[i] += b.values()[i];
  const auto ba = gaussian_blur(a, {3.0, -1});
  const auto bb = gaussian_blur(b, {3.0, -1});
  const auto bs = gaussian_blur(sum, {3.0, -1});
  for (std::size_t i = 0; i < bs.size(); ++i) {
    CHECK(std::abs(bs.values()[i] - (ba.values()[i] + bb.values()[i])) < 1e-6);
  }
  CHECK_THROWS_AS(gaussian_blur(a, {0.0, -1}), ContractError);
}

TEST_CASE("blur on an image narrower than the kernel stays finite and mean-preserving") {
  const auto a = random_image(5, 7, 4);
  const auto out = gaussian_blur(a, {8.0, -1});
  double sa = 0, so = 0;
  for (float v : a.values()) sa += v;
  for (float v : out.values()) so += v;
  // Symmetric reflection keeps every pixel's total weight equal, so the mean survives.
  CHECK(so == doctest::Approx(sa).epsilon(1e-5));
}

TEST_CASE("reflect index") {
  CHECK(reflect_index(-1, 5) == 0);
  CHECK(reflect_index(-2, 5) == 1);
  CHECK(reflect_index(5, 5) == 4);
  CHECK(reflect_index(6, 5) == 3);
  CHECK(reflect_index(12, 5) == 2);
  CHECK(reflect_index(-7, 5) == 3);
  CHECK(reflect_index(3, 1) == 0);
}

TEST_CASE("downsampling") {
  const auto flat = downsample_bilinear(LinearImage(16, 8, 0.42f), 4);
  for (float v : flat.values()) CHECK(v == 0.42f);

  LinearImage checker(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 3; ++c) checker.at(x, y, c) = ((x / 4 + y / 4) % 2) ? 1.0f : 0.0f;
  const auto d = downsample_bilinear(checker, 4);
  REQUIRE(d.width() == 2);
  REQUIRE(d.height() == 2);
  CHECK(d.at(0, 0, 0) == 0.0f);
  CHECK(d.at(1, 0, 0) == 1.0f);
  CHECK(d.at(0, 1, 2) == 1.0f);
  CHECK(d.at(1, 1, 1) == 0.0f);

  const auto a = random_image(12, 8, 5);
  const auto da = downsample_bilinear(a, 4);
  LinearImage a3 = a;
  for (float& v : a3.values()) v *= 3.0f;
  const auto d3 = downsample_bilinear(a3, 4);
  for (std::size_t i = 0; i < da.size(); ++i) CHECK(d3.values()[i] == doctest::Approx(3.0f * da.values()[i]).epsilon(1e-6));

  CHECK_THROWS_AS(downsample_bilinear(LinearImage(10, 8), 4), ContractError);
  CHECK_THROWS_AS(downsample_bilinear(LinearImage(8, 8), 0), ContractError);
}
