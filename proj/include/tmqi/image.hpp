#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tmqi {

// Rec.601 luma weights. Summed as kLumaR + (kLumaG + kLumaB) they give
// exactly 1.0 in binary64; luma() evaluates in that order.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

inline constexpr double luma(double r, double g, double b) {
  return kLumaR * r + (kLumaG * g + kLumaB * b);
}

/// Single-channel raster of doubles, row-major.
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t width, std::size_t height, double fill = 0.0);
  Plane(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  double at(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }
  double& at(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

using LuminancePlane = Plane;

/// Linear-light RGB reference image. Samples are finite and non-negative;
/// construction validates and throws Errc::kInvalidImage / kNonFiniteSample.
class HdrImage {
 public:
  HdrImage(std::size_t width, std::size_t height, std::vector<double> rgb);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }

  std::array<double, 3> pixel(std::size_t x, std::size_t y) const {
    const std::size_t i = 3 * (y * width_ + x);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  std::span<const double> samples() const noexcept { return data_; }

  /// Channel c (0 = R, 1 = G, 2 = B) as a plane.
  Plane channel(int c) const;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> data_;
};

/// 8-bit RGB candidate image.
class LdrImage {
 public:
  LdrImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> rgb);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }

  std::array<std::uint8_t, 3> pixel(std::size_t x, std::size_t y) const {
    const std::size_t i = 3 * (y * width_ + x);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  std::span<const std::uint8_t> samples() const noexcept { return data_; }

  Plane channel(int c) const;

  friend bool operator==(const LdrImage&, const LdrImage&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> data_;
};

Plane luminance(const HdrImage& img);
Plane luminance(const LdrImage& img);

/// LDR luminance in code values [0, 255].
Plane to_grayscale_f64(const LdrImage& img);

/// Affine map of [min, max] onto [0, 255]. Throws Errc::kConstantImage when
/// the plane holds a single value.
Plane normalize_hdr_luminance(const Plane& plane);

/// Same as normalize_hdr_luminance() but yields an all-zero plane for a
/// constant input instead of throwing.
Plane normalize_or_zero(const Plane& plane);

}  // namespace tmqi
