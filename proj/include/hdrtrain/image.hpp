#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hdrtrain/transfer.hpp"

namespace hdrtrain {

inline constexpr int kChannels = 3;

// Interleaved row-major RGB float buffer, top row first.
class PixelBuffer {
 public:
  PixelBuffer() = default;
  PixelBuffer(int width, int height, float fill = 0.0f);
  PixelBuffer(int width, int height, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const PixelBuffer& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  float& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }
  float at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }

  bool operator==(const PixelBuffer&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Relative linear BT.709 RGB. Nominally in [0, 1] and non-negative; see
// check_linear() for the operations that require it.
class LinearImage {
 public:
  LinearImage() = default;
  LinearImage(int width, int height, float fill = 0.0f) : pixels_(width, height, fill) {}
  LinearImage(int width, int height, std::vector<float> data)
      : pixels_(width, height, std::move(data)) {}
  explicit LinearImage(PixelBuffer pixels) : pixels_(std::move(pixels)) {}

  int width() const { return pixels_.width(); }
  int height() const { return pixels_.height(); }
  std::size_t size() const { return pixels_.size(); }

  float& at(int x, int y, int c) { return pixels_.at(x, y, c); }
  float at(int x, int y, int c) const { return pixels_.at(x, y, c); }
  std::span<float> values() { return pixels_.values(); }
  std::span<const float> values() const { return pixels_.values(); }

  const PixelBuffer& pixels() const { return pixels_; }
  PixelBuffer& pixels() { return pixels_; }

  bool operator==(const LinearImage&) const = default;

 private:
  PixelBuffer pixels_;
};

class EncodedImage {
 public:
  EncodedImage() = default;
  EncodedImage(PixelBuffer pixels, EncodingKind encoding)
      : pixels_(std::move(pixels)), encoding_(encoding) {}

  int width() const { return pixels_.width(); }
  int height() const { return pixels_.height(); }
  std::size_t size() const { return pixels_.size(); }
  const EncodingKind& encoding() const { return encoding_; }

  float at(int x, int y, int c) const { return pixels_.at(x, y, c); }
  std::span<const float> values() const { return pixels_.values(); }
  std::span<float> values() { return pixels_.values(); }

  const PixelBuffer& pixels() const { return pixels_; }

  bool operator==(const EncodedImage&) const = default;

 private:
  PixelBuffer pixels_;
  EncodingKind encoding_;
};

// Throws ContractError if any value is negative or non-finite.
void check_linear(const LinearImage& img);

// Luminance of linear RGB with BT.709 weights.
inline double bt709_luminance(double r, double g, double b) {
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

}  // namespace hdrtrain
