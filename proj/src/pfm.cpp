#include "hdrtrain/pfm.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "hdrtrain/error.hpp"

namespace hdrtrain {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::string token() {
    while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) out.push_back(static_cast<char>(bytes_[pos_++]));
    if (out.empty()) throw ContractError("PFM: truncated header");
    return out;
  }

  // Exactly one whitespace byte separates the scale from the payload.
  std::size_t payload_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ContractError("PFM: missing newline after scale");
    }
    return pos_ + 1;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

int parse_dimension(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ContractError("PFM: bad dimension '" + s + "'");
  }
  if (used != s.size() || v <= 0 || v > (1L << 24)) {
    throw ContractError("PFM: bad dimension '" + s + "'");
  }
  return static_cast<int>(v);
}

std::uint32_t load_u32(const std::uint8_t* p, bool little) {
  if (little) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
  }
  return static_cast<std::uint32_t>(p[3]) | static_cast<std::uint32_t>(p[2]) << 8 |
         static_cast<std::uint32_t>(p[1]) << 16 | static_cast<std::uint32_t>(p[0]) << 24;
}

}  // namespace

LinearImage parse_pfm(const std::vector<std::uint8_t>& bytes) {
  HeaderReader header(bytes);
  const std::string magic = header.token();
  int channels = 0;
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    throw ContractError("PFM: bad magic '" + magic + "'");
  }
  const int width = parse_dimension(header.token());
  const int height = parse_dimension(header.token());
  const std::string scale_text = header.token();
  double scale = 0.0;
  try {
    scale = std::stod(scale_text);
  } catch (const std::exception&) {
    throw ContractError("PFM: bad scale '" + scale_text + "'");
  }
  if (!(std::abs(scale) > 0.0) || !std::isfinite(scale)) {
    throw ContractError("PFM: scale must be finite and non-zero");
  }
  const bool little = scale < 0.0;
  const std::size_t offset = header.payload_offset();
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - offset < count * 4) {
    throw ContractError("PFM: truncated payload, expected " + std::to_string(count * 4) +
                        " bytes, found " + std::to_string(bytes.size() - offset));
  }

  PixelBuffer pixels(width, height);
  const std::uint8_t* src = bytes.data() + offset;
  for (int row = 0; row < height; ++row) {
    const int y = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        const float v = std::bit_cast<float>(load_u32(src, little));
        src += 4;
        if (!std::isfinite(v) || v < 0.0f) {
          throw ContractError("PFM: invalid pixel value " + std::to_string(v) + " at (" +
                              std::to_string(x) + "," + std::to_string(y) + ")");
        }
        if (channels == 1) {
          for (int k = 0; k < kChannels; ++k) pixels.at(x, y, k) = v;
        } else {
          pixels.at(x, y, c) = v;
        }
      }
    }
  }
  return LinearImage(std::move(pixels));
}

LinearImage read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return parse_pfm(bytes);
  } catch (const ContractError& e) {
    throw ContractError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> serialize_pfm(const PixelBuffer& pixels) {
  const std::string header =
      "PF\n" + std::to_string(pixels.width()) + " " + std::to_string(pixels.height()) + "\n-1.0\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + pixels.size() * 4);
  for (int row = 0; row < pixels.height(); ++row) {
    const int y = pixels.height() - 1 - row;
    for (int x = 0; x < pixels.width(); ++x) {
      for (int c = 0; c < kChannels; ++c) {
        const auto bits = std::bit_cast<std::uint32_t>(pixels.at(x, y, c));
        out.push_back(static_cast<std::uint8_t>(bits));
        out.push_back(static_cast<std::uint8_t>(bits >> 8));
        out.push_back(static_cast<std::uint8_t>(bits >> 16));
        out.push_back(static_cast<std::uint8_t>(bits >> 24));
      }
    }
  }
  return out;
}

namespace {

void write_bytes(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void write_pfm(const LinearImage& img, const std::filesystem::path& path) {
  write_bytes(serialize_pfm(img.pixels()), path);
}

void write_pfm(const EncodedImage& img, const std::filesystem::path& path) {
  write_bytes(serialize_pfm(img.pixels()), path);
}

}  // namespace hdrtrain
