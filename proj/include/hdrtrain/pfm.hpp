#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hdrtrain/image.hpp"

namespace hdrtrain {

// Portable float map I/O. Files store rows bottom-to-top; images in memory
// are top-to-bottom. "Pf" (grayscale) input is replicated into RGB.

// Rejects malformed headers, truncated payloads, NaN/Inf and negative values.
LinearImage read_pfm(const std::filesystem::path& path);
LinearImage parse_pfm(const std::vector<std::uint8_t>& bytes);

// Little-endian "PF" with scale -1.0.
void write_pfm(const LinearImage& img, const std::filesystem::path& path);
std::vector<std::uint8_t> serialize_pfm(const PixelBuffer& pixels);

// Writes encoded values with the same byte layout; the encoding tag is not
// stored.
void write_pfm(const EncodedImage& img, const std::filesystem::path& path);

}  // namespace hdrtrain
