#include "tmqi/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "tmqi/error.hpp"

namespace tmqi {

namespace {

void check_dims(std::size_t width, std::size_t height, std::size_t channels,
                std::size_t length) {
  if (width == 0 || height == 0) {
    throw Error(Errc::kInvalidImage, "image dimensions must be at least 1x1");
  }
  if (length != width * height * channels) {
    throw Error(Errc::kInvalidImage,
                "sample count " + std::to_string(length) + " does not match " +
                    std::to_string(width) + "x" + std::to_string(height) + "x" +
                    std::to_string(channels));
  }
}

template <typename Image>
Plane luminance_of(const Image& img) {
  Plane out(img.width(), img.height());
  const auto s = img.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = luma(static_cast<double>(s[3 * i]), static_cast<double>(s[3 * i + 1]),
                  static_cast<double>(s[3 * i + 2]));
  }
  return out;
}

template <typename Image>
Plane channel_of(const Image& img, int c) {
  if (c < 0 || c > 2) throw Error(Errc::kDomainError, "channel index out of range");
  Plane out(img.width(), img.height());
  const auto s = img.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(s[3 * i + static_cast<std::size_t>(c)]);
  }
  return out;
}

}  // namespace

Plane::Plane(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

Plane::Plane(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height, 1, data_.size());
}

HdrImage::HdrImage(std::size_t width, std::size_t height, std::vector<double> rgb)
    : width_(width), height_(height), data_(std::move(rgb)) {
  check_dims(width, height, 3, data_.size());
  for (const double v : data_) {
    if (!std::isfinite(v)) throw Error(Errc::kNonFiniteSample, "HDR sample is not finite");
    if (v < 0.0) throw Error(Errc::kInvalidImage, "HDR sample is negative");
  }
}

Plane HdrImage::channel(int c) const { return channel_of(*this, c); }

LdrImage::LdrImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), data_(std::move(rgb)) {
  check_dims(width, height, 3, data_.size());
}

Plane LdrImage::channel(int c) const { return channel_of(*this, c); }

Plane luminance(const HdrImage& img) { return luminance_of(img); }
Plane luminance(const LdrImage& img) { return luminance_of(img); }

Plane to_grayscale_f64(const LdrImage& img) { return luminance_of(img); }

Plane normalize_hdr_luminance(const Plane& plane) {
  const auto [lo_it, hi_it] = std::minmax_element(plane.values().begin(), plane.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw Error(Errc::kConstantImage, "plane has a single value");
  const double scale = 255.0 / (hi - lo);
  Plane out(plane.width(), plane.height());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    // (hi - lo) * (255 / (hi - lo)) can land one ulp off 255; pin the top.
    out[i] = plane[i] == hi ? 255.0 : std::min((plane[i] - lo) * scale, 255.0);
  }
  return out;
}

Plane normalize_or_zero(const Plane& plane) {
  try {
    return normalize_hdr_luminance(plane);
  } catch (const Error& e) {
    if (e.code() != Errc::kConstantImage) throw;
    return Plane(plane.width(), plane.height(), 0.0);
  }
}

}  // namespace tmqi
