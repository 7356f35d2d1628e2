#include <doctest.h>

#include <cmath>
#include <random>

#include "hdrtrain/error.hpp"
#include "hdrtrain/image.hpp"
#include "hdrtrain/transfer.hpp"
#include "oracles/oracles.hpp"

using namespace hdrtrain;

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(std::min(hi, std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1))));
  }
  return out;
}

}  // namespace

TEST_CASE("mu-law endpoints and midpoint") {
  CHECK(encode_mulaw(0.0, 5000.0) == 0.0);
  CHECK(encode_mulaw(1.0, 5000.0) == 1.0);
  // log(2501)/log(5001), evaluated with mpmath at 30 digits.
  CHECK(encode_mulaw(0.5, 5000.0) == doctest::Approx(0.918643271879646).epsilon(1e-13));
  CHECK(decode_mulaw(0.0) == 0.0);
  CHECK(decode_mulaw(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // (5001^0.9186 - 1)/5000 by mpmath.
  CHECK(decode_mulaw(0.9186) == doctest::Approx(0.499815678450365).epsilon(1e-12));
}

TEST_CASE("mu-law domain errors") {
  CHECK_THROWS_AS(encode_mulaw(-0.1), DomainError);
  CHECK_THROWS_AS(encode_mulaw(1.1), DomainError);
  CHECK_THROWS_AS(encode_mulaw(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(encode_mulaw(0.5, -3.0), DomainError);
  CHECK_THROWS_AS(decode_mulaw(1.5), DomainError);
  CHECK_THROWS_AS(encode_mulaw(std::nan("")), DomainError);
}

TEST_CASE("PU21 values") {
  CHECK(encode_pu21(0.005) == 0.0);
  // mpmath evaluations of the quadratic fit.
  CHECK(encode_pu21(100.0) == doctest::Approx(0.500940843938200).epsilon(1e-12));
  CHECK(encode_pu21(10000.0) == doctest::Approx(0.999219348610314).epsilon(1e-12));
  CHECK(encode_pu21(4000.0) == doctest::Approx(0.886653698816574).epsilon(1e-12));
  CHECK(decode_pu21(0.0) == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(decode_pu21(encode_pu21(100.0)) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(decode_pu21(0.9992) == doctest::Approx(9998.47043125984).epsilon(1e-10));
  CHECK_THROWS_AS(encode_pu21(0.004), DomainError);
  CHECK_THROWS_AS(encode_pu21(10001.0), DomainError);
  CHECK_THROWS_AS(decode_pu21(-0.01), DomainError);
  CHECK_THROWS_AS(decode_pu21(1.0), DomainError);
}

TEST_CASE("PQ values") {
  CHECK(encode_pq(10000.0) == 1.0);
  CHECK(encode_pq(0.005) > 0.0);
  CHECK(encode_pq(0.005) == doctest::Approx(0.0150763990423680).epsilon(1e-11));
  CHECK(encode_pq(4000.0) == doctest::Approx(0.902572393310940).epsilon(1e-12));
  CHECK(decode_pq(1.0) == doctest::Approx(10000.0).epsilon(1e-13));
  CHECK(decode_pq(encode_pq(500.0)) == doctest::Approx(500.0).epsilon(1e-10));
  CHECK(decode_pq(0.0150763990423680) == doctest::Approx(0.005).epsilon(1e-8));
  CHECK_THROWS_AS(encode_pq(-1.0), DomainError);
  CHECK_THROWS_AS(encode_pq(10000.5), DomainError);
  CHECK_THROWS_AS(decode_pq(0.0), DomainError);
  CHECK_THROWS_AS(decode_pq(1.01), DomainError);
}

TEST_CASE("scalar encoders agree with the independent formulas") {
  for (double lum : log_spaced(0.005, 10000.0, 200)) {
    CHECK(encode_pu21(lum) == doctest::Approx(oracle::pu21(lum)).epsilon(1e-12));
    CHECK(encode_pq(lum) == doctest::Approx(oracle::pq(lum)).epsilon(1e-12));
    CHECK(encode_mulaw(lum / 10000.0) == doctest::Approx(oracle::mulaw(lum / 10000.0, 5000.0)).epsilon(1e-12));
  }
}

TEST_CASE("strict monotonicity and round trip over log-spaced samples") {
  const auto lums = log_spaced(0.005, 10000.0, 2000);
  for (std::size_t i = 1; i < lums.size(); ++i) {
    REQUIRE(encode_pu21(lums[i - 1]) < encode_pu21(lums[i]));
    REQUIRE(encode_pq(lums[i - 1]) < encode_pq(lums[i]));
    REQUIRE(encode_mulaw(lums[i - 1] / 1e4) < encode_mulaw(lums[i] / 1e4));
  }
  for (double lum : lums) {
    CHECK(decode_pu21(encode_pu21(lum)) == doctest::Approx(lum).epsilon(1e-9));
    CHECK(decode_pq(encode_pq(lum)) == doctest::Approx(lum).epsilon(1e-9));
    CHECK(decode_mulaw(encode_mulaw(lum / 1e4)) == doctest::Approx(lum / 1e4).epsilon(1e-9));
  }
}

TEST_CASE("derivatives: closed forms at the documented points") {
  // b / (0.005 ln 2) and 5000 / ln 5001, by mpmath.
  CHECK(derivative(EncodingKind::pu21(), 0.005) == doctest::Approx(2.25060426378678).epsilon(1e-12));
  CHECK(derivative(EncodingKind::mulaw(), 0.0) == doctest::Approx(587.034072441094).epsilon(1e-12));
  CHECK(derivative(EncodingKind::linear(), 0.3) == 1.0);
  CHECK_THROWS_AS(derivative(EncodingKind::pq(), 0.0), DomainError);
  CHECK_THROWS_AS(derivative(EncodingKind::pu21(), 0.001), DomainError);
  CHECK_THROWS_AS(derivative(EncodingKind::mulaw(), 1.5), DomainError);
}

TEST_CASE("derivatives match central finite differences") {
  const auto lums = log_spaced(0.0051, 9990.0, 100);
  for (double lum : lums) {
    const double h = 1e-4 * lum;
    const double fd_pu = (oracle::pu21(lum + h) - oracle::pu21(lum - h)) / (2 * h);
    const double fd_pq = (oracle::pq(lum + h) - oracle::pq(lum - h)) / (2 * h);
    CHECK(derivative(EncodingKind::pu21(), lum) == doctest::Approx(fd_pu).epsilon(1e-4));
    CHECK(derivative(EncodingKind::pq(), lum) == doctest::Approx(fd_pq).epsilon(1e-4));
    const double l = lum / 1e4;
    const double hl = 1e-4 * l;
    const double fd_mu = (oracle::mulaw(l + hl, 5000) - oracle::mulaw(l - hl, 5000)) / (2 * hl);
    CHECK(derivative(EncodingKind::mulaw(), l) == doctest::Approx(fd_mu).epsilon(1e-4));
  }
}

TEST_CASE("PQ visibility ratio between darkness and 100 nit") {
  const double ratio = derivative(EncodingKind::pq(), 0.005) / derivative(EncodingKind::pq(), 100.0);
  CHECK(ratio > 150.0);
}

TEST_CASE("relative derivative applies the display peak") {
  const DisplayModel d;
  CHECK(derivative_relative(EncodingKind::pq(), 0.25, d) ==
        doctest::Approx(derivative(EncodingKind::pq(), 1000.0) * 4000.0).epsilon(1e-14));
  CHECK(derivative_relative(EncodingKind::mulaw(), 0.25, d) == derivative(EncodingKind::mulaw(), 0.25));
}

TEST_CASE("encode_image clamps and encodes per element") {
  const DisplayModel d;
  LinearImage one(3, 2, 1.0f);
  auto pq = encode_image(one, EncodingKind::pq(), d);
  for (float v : pq.values()) CHECK(v == doctest::Approx(0.902572393310940).epsilon(1e-6));

  LinearImage zero(3, 2, 0.0f);
  const auto enc = encode_image(zero, EncodingKind::pu21(), d);
  for (float v : enc.values()) CHECK(v == 0.0f);

  LinearImage mixed(2, 1, std::vector<float>{-0.5f, 0.25f, 1.5f, 0.0f, 0.75f, 1.0f});
  auto lin = encode_image(mixed, EncodingKind::linear(), d);
  const std::vector<float> expect{0.0f, 0.25f, 1.0f, 0.0f, 0.75f, 1.0f};
  CHECK(std::vector<float>(lin.values().begin(), lin.values().end()) == expect);
  CHECK(lin.encoding() == EncodingKind::linear());
}

TEST_CASE("image-level encode equals element-wise scalar encode on a random 4x4 image") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  LinearImage img(4, 4);
  for (float& v : img.values()) v = u(gen);
  const DisplayModel d;
  for (auto kind : {EncodingKind::linear(), EncodingKind::mulaw(), EncodingKind::pq(), EncodingKind::pu21()}) {
    const auto enc = encode_image(img, kind, d);
    for (std::size_t i = 0; i < img.size(); ++i) {
      const double rel = img.values()[i];
      const double x = kind.absolute() ? std::clamp(rel * d.peak, d.black_level, d.peak) : rel;
      CHECK(enc.values()[i] == static_cast<float>(encode_scalar(kind, x)));
    }
  }
}

TEST_CASE("decode_image inverts encode_image on the clamped range") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  LinearImage img(25, 40);
  for (float& v : img.values()) v = std::max(u(gen) * u(gen), 2e-6f);
  const DisplayModel d;
  for (auto kind : {EncodingKind::linear(), EncodingKind::mulaw(), EncodingKind::pq(), EncodingKind::pu21()}) {
    const auto back = decode_image(encode_image(img, kind, d), d);
    for (std::size_t i = 0; i < img.size(); ++i) {
      double expect = img.values()[i];
      if (kind.absolute()) expect = std::max(expect, d.black_level / d.peak);
      CHECK(back.values()[i] == doctest::Approx(expect).epsilon(1e-5));
    }
  }
}

TEST_CASE("decoding PQ 1.0 yields relative 2.5 at peak 4000") {
  PixelBuffer p(2, 2, 1.0f);
  const auto lin = decode_image(EncodedImage(p, EncodingKind::pq()), DisplayModel{});
  for (float v : lin.values()) CHECK(v == doctest::Approx(2.5f).epsilon(1e-6));
}

TEST_CASE("display model validation and encoding names") {
  CHECK_THROWS_AS(encode_image(LinearImage(1, 1), EncodingKind::pq(), DisplayModel{0.0, 4000.0}), ContractError);
  CHECK_THROWS_AS(DisplayModel({10.0, 5.0}).validate(), ContractError);
  CHECK_THROWS_AS(DisplayModel({0.005, 20000.0}).validate(), ContractError);
  CHECK(parse_encoding("PU21") == EncodingKind::pu21());
  CHECK(parse_encoding("mu-law").tag == Encoding::MuLaw);
  CHECK_THROWS_AS(parse_encoding("srgb"), ContractError);
}
