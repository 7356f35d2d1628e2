#include "hdrtrain/loss.hpp"

#include <cmath>

#include "hdrtrain/error.hpp"

namespace hdrtrain {
namespace {

void check_shapes(const PixelBuffer& a, const PixelBuffer& b) {
  if (!a.same_shape(b)) {
    throw ContractError("loss operands differ in shape: " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
  }
}

double mean_abs_diff(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return sum / static_cast<double>(a.size());
}

}  // namespace

std::string loss_name(const LossKind& loss) {
  if (std::holds_alternative<L1Loss>(loss)) return "l1";
  if (const auto* e = std::get_if<EncodedL1Loss>(&loss)) {
    return std::string(encoding_name(e->encoding.tag)) + "-l1";
  }
  return "smape";
}

double loss_l1(const LinearImage& pred, const LinearImage& ref) {
  check_shapes(pred.pixels(), ref.pixels());
  return mean_abs_diff(pred.values(), ref.values());
}

double loss_l1(const EncodedImage& pred, const EncodedImage& ref) {
  check_shapes(pred.pixels(), ref.pixels());
  if (!(pred.encoding() == ref.encoding())) {
    throw ContractError("loss operands have different encodings");
  }
  return mean_abs_diff(pred.values(), ref.values());
}

double loss_encoded_l1(const LinearImage& pred, const LinearImage& ref,
                       const EncodingKind& encoding, const DisplayModel& display) {
  check_shapes(pred.pixels(), ref.pixels());
  return loss_l1(encode_image(pred, encoding, display), encode_image(ref, encoding, display));
}

double loss_smape(const LinearImage& pred, const LinearImage& ref, double epsilon) {
  check_shapes(pred.pixels(), ref.pixels());
  if (!(epsilon > 0.0)) {
    throw ContractError("SMAPE epsilon must be positive");
  }
  auto p = pred.values();
  auto r = ref.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p[i];
    const double b = r[i];
    sum += std::abs(a - b) / (std::abs(a) + std::abs(b) + epsilon);
  }
  return sum / static_cast<double>(p.size());
}

double evaluate_loss(const LossKind& loss, const LinearImage& pred, const LinearImage& ref,
                     const DisplayModel& display) {
  return std::visit(
      [&](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, L1Loss>) {
          return loss_l1(pred, ref);
        } else if constexpr (std::is_same_v<T, EncodedL1Loss>) {
          return loss_encoded_l1(pred, ref, l.encoding, display);
        } else {
          return loss_smape(pred, ref, l.epsilon);
        }
      },
      loss);
}

const std::vector<Condition>& condition_registry() {
  static const std::vector<Condition> registry = {
      {"Linear-L1", EncodingKind::linear(), L1Loss{}},
      {"PQ-L1", EncodingKind::pq(), L1Loss{}},
      {"PU21-L1", EncodingKind::pu21(), L1Loss{}},
      {"mu-L1", EncodingKind::mulaw(), L1Loss{}},
      {"Linear-PQ", EncodingKind::linear(), EncodedL1Loss{EncodingKind::pq()}},
      {"Linear-PU21", EncodingKind::linear(), EncodedL1Loss{EncodingKind::pu21()}},
      {"Linear-mu", EncodingKind::linear(), EncodedL1Loss{EncodingKind::mulaw()}},
      {"Linear-SMAPE", EncodingKind::linear(), SmapeLoss{}},
  };
  return registry;
}

namespace {

const Condition* lookup_condition(std::string_view label) {
  std::string key(label);
  if (key == "\xce\xbc-L1") key = "mu-L1";
  if (key == "Linear-\xce\xbc") key = "Linear-mu";
  for (const auto& c : condition_registry()) {
    if (c.label == key) return &c;
  }
  return nullptr;
}

}  // namespace

std::optional<Condition> find_condition(std::string_view label) {
  if (const Condition* c = lookup_condition(label)) return *c;
  return std::nullopt;
}

const Condition& condition_by_label(std::string_view label) {
  if (const Condition* c = lookup_condition(label)) return *c;
  throw ContractError("unknown condition '" + std::string(label) + "'");
}

}  // namespace hdrtrain
