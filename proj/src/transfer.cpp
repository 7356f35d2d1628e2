#include "hdrtrain/transfer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "hdrtrain/error.hpp"
#include "hdrtrain/image.hpp"

namespace hdrtrain {
namespace {

const double kPu21LogMin = std::log2(PU21Params::min_luminance);

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void domain_fail(const char* fn, double x) {
  throw DomainError(std::string(fn) + ": argument " + std::to_string(x) + " outside domain");
}

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("mu-law: mu must be positive, got " + std::to_string(mu));
  }
}

// Unchecked forms; callers guarantee the domain.

double mulaw_raw(double l, double mu) { return std::log1p(mu * l) / std::log1p(mu); }

double mulaw_inv_raw(double v, double mu) { return std::expm1(v * std::log1p(mu)) / mu; }

double pu21_raw(double luminance) {
  const double x = std::log2(luminance) - kPu21LogMin;
  return PU21Params::a * x * x + PU21Params::b * x;
}

double pu21_inv_raw(double v) {
  constexpr double a = PU21Params::a;
  constexpr double b = PU21Params::b;
  const double disc = b * b + 4.0 * a * v;
  if (disc < 0.0) {
    throw DomainError("decode_pu21: negative discriminant");
  }
  return std::exp2((2.0 * a * kPu21LogMin - b + std::sqrt(disc)) / (2.0 * a));
}

double pq_raw(double luminance) {
  const double ym = std::pow(luminance / PQParams::max_luminance, PQParams::m1);
  return std::pow((PQParams::c1 + PQParams::c2 * ym) / (1.0 + PQParams::c3 * ym), PQParams::m2);
}

double pq_inv_raw(double v) {
  const double vp = std::pow(v, 1.0 / PQParams::m2);
  const double num = std::max(vp - PQParams::c1, 0.0);
  const double den = PQParams::c2 - PQParams::c3 * vp;
  return PQParams::max_luminance * std::pow(num / den, 1.0 / PQParams::m1);
}

double pu21_ceiling() {
  static const double v = pu21_raw(PU21Params::max_luminance);
  return v;
}

}  // namespace

void DisplayModel::validate() const {
  if (!(black_level > 0.0 && black_level < peak && peak <= kReferenceMax)) {
    throw ContractError("DisplayModel requires 0 < black_level < peak <= 10000");
  }
}

std::string_view encoding_name(Encoding tag) {
  switch (tag) {
    case Encoding::Linear:
      return "linear";
    case Encoding::MuLaw:
      return "mulaw";
    case Encoding::PQ:
      return "pq";
    case Encoding::PU21:
      return "pu21";
  }
  return "unknown";
}

EncodingKind parse_encoding(std::string_view name, double mu) {
  const std::string n = lower(name);
  if (n == "linear") return EncodingKind::linear();
  if (n == "mulaw" || n == "mu-law" || n == "mu" || n == "\xce\xbc") {
    check_mu(mu);
    return EncodingKind::mulaw(mu);
  }
  if (n == "pq") return EncodingKind::pq();
  if (n == "pu21" || n == "pu") return EncodingKind::pu21();
  throw ContractError("unknown encoding '" + std::string(name) + "'");
}

double encode_mulaw(double l, double mu) {
  check_mu(mu);
  if (!(l >= 0.0 && l <= 1.0)) domain_fail("encode_mulaw", l);
  return mulaw_raw(l, mu);
}

double decode_mulaw(double v, double mu) {
  check_mu(mu);
  if (!(v >= 0.0 && v <= 1.0)) domain_fail("decode_mulaw", v);
  return mulaw_inv_raw(v, mu);
}

double encode_pu21(double luminance) {
  if (!(luminance >= PU21Params::min_luminance && luminance <= PU21Params::max_luminance)) {
    domain_fail("encode_pu21", luminance);
  }
  return pu21_raw(luminance);
}

double decode_pu21(double v) {
  if (!(v >= 0.0 && v <= pu21_ceiling())) domain_fail("decode_pu21", v);
  return pu21_inv_raw(v);
}

double encode_pq(double luminance) {
  if (!(luminance >= 0.0 && luminance <= PQParams::max_luminance)) {
    domain_fail("encode_pq", luminance);
  }
  return pq_raw(luminance);
}

double decode_pq(double v) {
  if (!(v > 0.0 && v <= 1.0)) domain_fail("decode_pq", v);
  return pq_inv_raw(v);
}

double encode_scalar(const EncodingKind& kind, double x) {
  switch (kind.tag) {
    case Encoding::Linear:
      if (!(x >= 0.0 && x <= 1.0)) domain_fail("encode_linear", x);
      return x;
    case Encoding::MuLaw:
      return encode_mulaw(x, kind.mu);
    case Encoding::PQ:
      return encode_pq(x);
    case Encoding::PU21:
      return encode_pu21(x);
  }
  return x;
}

double decode_scalar(const EncodingKind& kind, double v) {
  switch (kind.tag) {
    case Encoding::Linear:
      if (!(v >= 0.0 && v <= 1.0)) domain_fail("decode_linear", v);
      return v;
    case Encoding::MuLaw:
      return decode_mulaw(v, kind.mu);
    case Encoding::PQ:
      return decode_pq(v);
    case Encoding::PU21:
      return decode_pu21(v);
  }
  return v;
}

double derivative(const EncodingKind& kind, double x) {
  switch (kind.tag) {
    case Encoding::Linear:
      if (!(x >= 0.0 && x <= 1.0)) domain_fail("derivative(linear)", x);
      return 1.0;
    case Encoding::MuLaw: {
      check_mu(kind.mu);
      if (!(x >= 0.0 && x <= 1.0)) domain_fail("derivative(mulaw)", x);
      return kind.mu / ((1.0 + kind.mu * x) * std::log1p(kind.mu));
    }
    case Encoding::PU21: {
      if (!(x >= PU21Params::min_luminance && x <= PU21Params::max_luminance)) {
        domain_fail("derivative(pu21)", x);
      }
      const double lx = std::log2(x) - kPu21LogMin;
      return (2.0 * PU21Params::a * lx + PU21Params::b) / (x * std::numbers::ln2);
    }
    case Encoding::PQ: {
      // Slope is unbounded at L = 0 because m1 < 1.
      if (!(x > 0.0 && x <= PQParams::max_luminance)) domain_fail("derivative(pq)", x);
      using P = PQParams;
      const double y = x / P::max_luminance;
      const double ym = std::pow(y, P::m1);
      const double den = 1.0 + P::c3 * ym;
      const double n = (P::c1 + P::c2 * ym) / den;
      const double dn_dy = P::m1 * std::pow(y, P::m1 - 1.0) * (P::c2 - P::c1 * P::c3) / (den * den);
      return P::m2 * std::pow(n, P::m2 - 1.0) * dn_dy / P::max_luminance;
    }
  }
  return 0.0;
}

double derivative_relative(const EncodingKind& kind, double relative,
                           const DisplayModel& display) {
  if (kind.absolute()) {
    return derivative(kind, display.absolute(relative)) * display.peak;
  }
  return derivative(kind, relative);
}

double encode_relative(const EncodingKind& kind, double relative, const DisplayModel& display) {
  switch (kind.tag) {
    case Encoding::Linear:
      return std::clamp(relative, 0.0, 1.0);
    case Encoding::MuLaw:
      return mulaw_raw(std::clamp(relative, 0.0, 1.0), kind.mu);
    case Encoding::PQ:
      return pq_raw(std::clamp(display.absolute(relative), display.black_level, display.peak));
    case Encoding::PU21:
      return pu21_raw(std::clamp(display.absolute(relative), display.black_level, display.peak));
  }
  return relative;
}

EncodedImage encode_image(const LinearImage& img, const EncodingKind& kind,
                          const DisplayModel& display) {
  display.validate();
  if (kind.tag == Encoding::MuLaw) check_mu(kind.mu);
  PixelBuffer out(img.width(), img.height());
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<float>(encode_relative(kind, src[i], display));
  }
  return EncodedImage(std::move(out), kind);
}

LinearImage decode_image(const EncodedImage& img, const DisplayModel& display) {
  display.validate();
  const EncodingKind& kind = img.encoding();
  LinearImage out(img.width(), img.height());
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = src[i];
    double rel = 0.0;
    switch (kind.tag) {
      case Encoding::Linear:
        rel = std::clamp(v, 0.0, 1.0);
        break;
      case Encoding::MuLaw:
        rel = mulaw_inv_raw(std::clamp(v, 0.0, 1.0), kind.mu);
        break;
      case Encoding::PQ:
        rel = display.relative(pq_inv_raw(std::clamp(v, 0.0, 1.0)));
        break;
      case Encoding::PU21:
        rel = display.relative(pu21_inv_raw(std::clamp(v, 0.0, pu21_ceiling())));
        break;
    }
    dst[i] = static_cast<float>(rel);
  }
  return out;
}

}  // namespace hdrtrain
