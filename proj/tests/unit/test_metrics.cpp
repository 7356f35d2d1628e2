#include <doctest.h>

#include <random>

#include "hdrtrain/error.hpp"
#include "hdrtrain/metrics.hpp"
#include "oracles/oracles.hpp"

using namespace hdrtrain;

namespace {

LinearImage random_image(int w, int h, std::mt19937& gen) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  LinearImage img(w, h);
  // Squared uniforms put more mass at dark values, like HDR content.
  for (float& v : img.values()) {
    const float x = u(gen);
    v = x * x;
  }
  return img;
}

oracle::Img to_oracle(const LinearImage& img) {
  oracle::Img o{img.width(), img.height(), {}};
  for (float v : img.values()) o.v.push_back(v);
  return o;
}

}  // namespace

TEST_CASE("identical images hit the PSNR cap and SSIM 1") {
  std::mt19937 gen(1);
  const auto a = random_image(16, 12, gen);
  CHECK(pu_psnr(a, a) == kPsnrCapDb);
  CHECK(pu_ssim(a, a) == 1.0);
}

TEST_CASE("an encoded difference of 0.1 everywhere gives 20 dB") {
  const DisplayModel d;
  const double v0 = encode_pu21(50.0);
  const auto ref = LinearImage(8, 8, static_cast<float>(50.0 / d.peak));
  const auto test = LinearImage(8, 8, static_cast<float>(decode_pu21(v0 + 0.1) / d.peak));
  CHECK(pu_psnr(test, ref, d) == doctest::Approx(20.0).epsilon(1e-5));
}

TEST_CASE("PSNR and SSIM match the direct-formula oracle") {
  std::mt19937 gen(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_image(8, 8, gen);
    const auto b = random_image(8, 8, gen);
    CHECK(std::abs(pu_psnr(a, b) - oracle::psnr_pu(to_oracle(a), to_oracle(b))) < 1e-6);
    const auto c = random_image(17, 13, gen);
    const auto e = random_image(17, 13, gen);
    CHECK(std::abs(pu_ssim(c, e) - oracle::ssim_pu(to_oracle(c), to_oracle(e))) < 1e-6);
    CHECK(std::abs(pu_ssim(a, b, {}, {7, 1.5, 1.0}) - oracle::ssim_pu(to_oracle(a), to_oracle(b), 7)) < 1e-6);
  }
}

TEST_CASE("SSIM of an inverted high-variance pattern is low") {
  std::mt19937 gen(3);
  const auto ref = random_image(24, 24, gen);
  LinearImage inv = ref;
  for (float& v : inv.values()) v = 1.0f - v;
  const double s = pu_ssim(inv, ref);
  CHECK(s < 0.2);
  CHECK(std::abs(s - oracle::ssim_pu(to_oracle(inv), to_oracle(ref))) < 1e-6);
}

TEST_CASE("SSIM is symmetric and bounded") {
  std::mt19937 gen(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_image(14, 11, gen);
    const auto b = random_image(14, 11, gen);
    const double s = pu_ssim(a, b);
    CHECK(s == doctest::Approx(pu_ssim(b, a)).epsilon(1e-14));
    CHECK(s <= 1.0);
    CHECK(s >= -1.0);
  }
}

TEST_CASE("PSNR decreases as added noise grows") {
  std::mt19937 gen(5);
  const auto ref = random_image(16, 16, gen);
  std::normal_distribution<float> n(0.0f, 1.0f);
  std::vector<float> noise(ref.size());
  for (float& v : noise) v = n(gen);
  double previous = kPsnrCapDb;
  for (float amp : {0.001f, 0.01f, 0.1f}) {
    LinearImage test = ref;
    for (std::size_t i = 0; i < test.size(); ++i) test.values()[i] = std::max(0.0f, test.values()[i] + amp * noise[i]);
    const double p = pu_psnr(test, ref);
    CHECK(p < previous);
    previous = p;
  }
}

TEST_CASE("metric contract errors") {
  CHECK_THROWS_AS(pu_psnr(LinearImage(8, 8), LinearImage(8, 9)), ContractError);
  CHECK_THROWS_AS(pu_ssim(LinearImage(10, 20), LinearImage(10, 20)), ContractError);
  CHECK_THROWS_AS(pu_ssim(LinearImage(12, 12), LinearImage(12, 12), {}, {4, 1.5, 1.0}), ContractError);
  CHECK(parse_metric("PU-PSNR") == Metric::PuPsnr);
  CHECK(parse_metric("pu_ssim") == Metric::PuSsim);
  CHECK_THROWS_AS(parse_metric("vdp"), ContractError);
}
