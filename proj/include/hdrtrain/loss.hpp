#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hdrtrain/image.hpp"
#include "hdrtrain/transfer.hpp"

namespace hdrtrain {

struct L1Loss {
  bool operator==(const L1Loss&) const = default;
};

// L1 distance after encoding both operands with `encoding`.
struct EncodedL1Loss {
  EncodingKind encoding;
  bool operator==(const EncodedL1Loss&) const = default;
};

struct SmapeLoss {
  static constexpr double kDefaultEpsilon = 1e-3;
  double epsilon = kDefaultEpsilon;
  bool operator==(const SmapeLoss&) const = default;
};

using LossKind = std::variant<L1Loss, EncodedL1Loss, SmapeLoss>;

std::string loss_name(const LossKind& loss);

// Mean absolute difference. Shapes (and encodings for EncodedImage) must match.
double loss_l1(const LinearImage& pred, const LinearImage& ref);
double loss_l1(const EncodedImage& pred, const EncodedImage& ref);

// L1 between encode_image(pred) and encode_image(ref). Out-of-range
// predictions are clamped by the encoder.
double loss_encoded_l1(const LinearImage& pred, const LinearImage& ref,
                       const EncodingKind& encoding, const DisplayModel& display = {});

// mean(|p - r| / (|p| + |r| + eps)) on relative linear values.
double loss_smape(const LinearImage& pred, const LinearImage& ref,
                  double epsilon = SmapeLoss::kDefaultEpsilon);

// Applies `loss` to linear operands.
double evaluate_loss(const LossKind& loss, const LinearImage& pred, const LinearImage& ref,
                     const DisplayModel& display = {});

// One (pixel encoding, loss) training configuration.
struct Condition {
  std::string label;
  EncodingKind encoding;  // applied to data before the model
  LossKind loss;          // applied to the model output
};

// The eight tested configurations, in table order.
const std::vector<Condition>& condition_registry();

// Looks up by label; "μ-L1" and "Linear-μ" are accepted for "mu-L1" and
// "Linear-mu".
std::optional<Condition> find_condition(std::string_view label);
const Condition& condition_by_label(std::string_view label);

}  // namespace hdrtrain
