#pragma once

#include <string>
#include <string_view>

namespace hdrtrain {

class LinearImage;
class EncodedImage;

// Maps relative linear values to absolute luminance in cd/m^2.
struct DisplayModel {
  static constexpr double kReferenceMax = 10000.0;

  double black_level = 0.005;
  double peak = 4000.0;

  double absolute(double relative) const { return relative * peak; }
  double relative(double absolute) const { return absolute / peak; }

  // Throws ContractError unless 0 < black_level < peak <= kReferenceMax.
  void validate() const;

  bool operator==(const DisplayModel&) const = default;
};

enum class Encoding { Linear, MuLaw, PQ, PU21 };

struct EncodingKind {
  static constexpr double kDefaultMu = 5000.0;

  Encoding tag = Encoding::Linear;
  double mu = kDefaultMu;  // used by MuLaw only

  static EncodingKind linear() { return {Encoding::Linear, kDefaultMu}; }
  static EncodingKind mulaw(double mu = kDefaultMu) { return {Encoding::MuLaw, mu}; }
  static EncodingKind pq() { return {Encoding::PQ, kDefaultMu}; }
  static EncodingKind pu21() { return {Encoding::PU21, kDefaultMu}; }

  // PQ and PU21 take absolute luminance; Linear and MuLaw take relative values.
  bool absolute() const { return tag == Encoding::PQ || tag == Encoding::PU21; }

  bool operator==(const EncodingKind& o) const {
    return tag == o.tag && (tag != Encoding::MuLaw || mu == o.mu);
  }
};

std::string_view encoding_name(Encoding tag);
// Accepts "linear", "mulaw" / "mu-law" / "mu", "pq", "pu21" (case-insensitive).
EncodingKind parse_encoding(std::string_view name, double mu = EncodingKind::kDefaultMu);

// Quadratic-in-log2 fit of the PU21 banding curve.
struct PU21Params {
  static constexpr double a = 0.001908;
  static constexpr double b = 0.0078;
  static constexpr double min_luminance = 0.005;
  static constexpr double max_luminance = 10000.0;
};

// SMPTE ST 2084 constants.
struct PQParams {
  static constexpr double m1 = 2610.0 / 16384.0;
  static constexpr double m2 = 2523.0 / 4096.0 * 128.0;
  static constexpr double c1 = 3424.0 / 4096.0;
  static constexpr double c2 = 2413.0 / 4096.0 * 32.0;
  static constexpr double c3 = 2392.0 / 4096.0 * 32.0;
  static constexpr double max_luminance = 10000.0;
};

// Scalar transfer functions. Domains are strict: out-of-range input throws
// DomainError. Image-level functions clamp before calling these.

double encode_mulaw(double l, double mu = EncodingKind::kDefaultMu);
double decode_mulaw(double v, double mu = EncodingKind::kDefaultMu);

double encode_pu21(double luminance);
double decode_pu21(double v);

double encode_pq(double luminance);
double decode_pq(double v);

// Encodes one scalar in the encoding's native units (relative for
// Linear/MuLaw, absolute cd/m^2 for PQ/PU21).
double encode_scalar(const EncodingKind& kind, double x);
double decode_scalar(const EncodingKind& kind, double v);

// dV/dx in the encoding's native input units. Accepts the closed domain
// where the slope is finite: l in [0,1] for MuLaw, L in [0.005, 10000] for
// PU21, L in (0, 10000] for PQ.
double derivative(const EncodingKind& kind, double x);
// dV/d(relative value): chain rule through display.absolute() for PQ/PU21.
double derivative_relative(const EncodingKind& kind, double relative,
                           const DisplayModel& display);

// Relative values are clamped to [0,1] for Linear/MuLaw, or mapped to
// absolute and clamped to [black_level, peak] for PQ/PU21, then encoded.
EncodedImage encode_image(const LinearImage& img, const EncodingKind& kind,
                          const DisplayModel& display);
// Inverse of encode_image. Encoded values are clamped to the encoder's range
// before inversion; PQ/PU21 results are divided by the display peak and may
// exceed 1.
LinearImage decode_image(const EncodedImage& img, const DisplayModel& display);

// Encoded value of the clamped relative value, as used by encode_image.
double encode_relative(const EncodingKind& kind, double relative,
                       const DisplayModel& display);

}  // namespace hdrtrain
