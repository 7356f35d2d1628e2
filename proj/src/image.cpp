#include "hdrtrain/image.hpp"

#include <cmath>
#include <string>

#include "hdrtrain/error.hpp"

namespace hdrtrain {

PixelBuffer::PixelBuffer(int width, int height, float fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw ContractError("image dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height * kChannels, fill);
}

PixelBuffer::PixelBuffer(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width <= 0 || height <= 0) {
    throw ContractError("image dimensions must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * kChannels) {
    throw ContractError("pixel data length " + std::to_string(data_.size()) +
                        " does not match " + std::to_string(width) + "x" +
                        std::to_string(height) + "x3");
  }
}

void check_linear(const LinearImage& img) {
  auto v = img.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0f) {
      throw ContractError("linear image has invalid value " + std::to_string(v[i]) +
                          " at element " + std::to_string(i));
    }
  }
}

}  // namespace hdrtrain
