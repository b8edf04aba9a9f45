#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tmqi/image.hpp"

namespace tmqi::io {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// ---------------------------------------------------------------------------
// Radiance RGBE
// ---------------------------------------------------------------------------

struct Rgbe {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t e = 0;

  friend bool operator==(const Rgbe&, const Rgbe&) = default;
};

/// Decodes with the mantissa-centre convention: (m + 0.5) * 2^(e - 136),
/// and e == 0 is exact black.
std::array<double, 3> rgbe_decode(Rgbe p);

/// Shared-exponent encoding. The exponent comes from the largest channel
/// (frexp convention, so the largest mantissa lands in [128, 255]); values
/// too small for the exponent byte encode as black, values too large
/// saturate. Throws Errc::kNonFiniteSample on NaN/inf and
/// Errc::kInvalidImage on negatives.
Rgbe rgbe_encode(double r, double g, double b);

enum class ScanlineEncoding { kRle, kFlat };

HdrImage read_radiance_hdr(ByteView bytes);
Bytes write_radiance_hdr(const HdrImage& img, ScanlineEncoding encoding = ScanlineEncoding::kRle);

// ---------------------------------------------------------------------------
// PFM, PPM, PNG
// ---------------------------------------------------------------------------

/// "PF" (RGB) or "Pf" (grey, replicated to RGB). Negative scale means
/// little-endian samples. Rows are stored bottom-up.
HdrImage read_pfm(ByteView bytes);
Bytes write_pfm(const HdrImage& img);

/// Binary P6 with maxval 255 only.
LdrImage read_ppm(ByteView bytes);
Bytes write_ppm(const LdrImage& img);

/// 8-bit PNG; grey and palette images expand to RGB, alpha is dropped with a
/// warning on std::clog.
LdrImage read_png(ByteView bytes);
Bytes write_png(const LdrImage& img);
Bytes write_png_gray(std::size_t width, std::size_t height, std::span<const std::uint8_t> gray);

/// Format sniffing by magic bytes.
HdrImage read_hdr(ByteView bytes);
LdrImage read_ldr(ByteView bytes);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteView bytes);

/// read_file + read_hdr/read_ldr; parse errors are re-thrown with the path
/// prefixed to the detail.
HdrImage load_hdr(const std::filesystem::path& path);
LdrImage load_ldr(const std::filesystem::path& path);

}  // namespace tmqi::io
