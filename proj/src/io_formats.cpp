#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include <png.h>

#include "tmqi/error.hpp"
#include "tmqi/io.hpp"

namespace tmqi::io {

namespace {

// Netpbm-style header tokenizer: whitespace separated, '#' starts a comment.
class HeaderTokens {
 public:
  explicit HeaderTokens(ByteView bytes) : bytes_(bytes) {}

  std::string next() {
    skip_space_and_comments();
    std::string tok;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
      tok.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (tok.empty()) throw Error(Errc::kBadHeader, "header ends early");
    return tok;
  }

  long next_int() {
    const std::string tok = next();
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error(Errc::kBadHeader, "expected integer, got '" + tok + "'");
    return v;
  }

  double next_double() {
    const std::string tok = next();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw Error(Errc::kBadHeader, "expected number, got '" + tok + "'");
    return v;
  }

  // Exactly one whitespace byte separates the header from the payload.
  std::size_t payload_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(Errc::kBadHeader, "missing separator before pixel data");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  ByteView bytes_;
  std::size_t pos_ = 0;
};

bool starts_with(ByteView bytes, std::string_view magic) {
  return bytes.size() >= magic.size() &&
         std::memcmp(bytes.data(), magic.data(), magic.size()) == 0;
}

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool is_png(ByteView bytes) {
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0;
}

void append_string(Bytes& out, const std::string& s) { out.insert(out.end(), s.begin(), s.end()); }

}  // namespace

HdrImage read_pfm(ByteView bytes) {
  HeaderTokens tokens(bytes);
  const std::string magic = tokens.next();
  std::size_t channels = 0;
  if (magic == "PF") {
    channels = 3;
  } else if (magic == "Pf") {
    channels = 1;
  } else {
    throw Error(Errc::kBadMagic, "expected 'PF' or 'Pf'");
  }
  const long w = tokens.next_int();
  const long h = tokens.next_int();
  const double scale = tokens.next_double();
  if (w <= 0 || h <= 0) throw Error(Errc::kBadHeader, "non-positive PFM dimensions");
  if (scale == 0.0 || !std::isfinite(scale)) throw Error(Errc::kBadHeader, "PFM scale must be non-zero");
  const std::size_t offset = tokens.payload_offset();
  const auto width = static_cast<std::size_t>(w);
  const auto height = static_cast<std::size_t>(h);
  const std::size_t count = width * height * channels;
  if (bytes.size() - offset < 4 * count) throw Error(Errc::kTruncatedScanline, "PFM payload ends early");

  const bool little = scale < 0.0;
  const bool swap = little != (std::endian::native == std::endian::little);
  std::vector<double> rgb(width * height * 3);
  for (std::size_t row = 0; row < height; ++row) {
    const std::size_t y = height - 1 - row;  // bottom-up
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        std::uint8_t raw[4];
        std::memcpy(raw, bytes.data() + offset + 4 * ((row * width + x) * channels + c), 4);
        if (swap) std::swap(raw[0], raw[3]), std::swap(raw[1], raw[2]);
        float v = 0.0f;
        std::memcpy(&v, raw, 4);
        if (!std::isfinite(v)) throw Error(Errc::kNonFiniteSample, "PFM sample is not finite");
        const std::size_t dst = 3 * (y * width + x);
        if (channels == 1) {
          rgb[dst] = rgb[dst + 1] = rgb[dst + 2] = v;
        } else {
          rgb[dst + c] = v;
        }
      }
    }
  }
  return HdrImage(width, height, std::move(rgb));
}

Bytes write_pfm(const HdrImage& img) {
  Bytes out;
  const double scale = std::endian::native == std::endian::little ? -1.0 : 1.0;
  append_string(out, "PF\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                         "\n" + (scale < 0 ? "-1.0" : "1.0") + "\n");
  for (std::size_t row = 0; row < img.height(); ++row) {
    const std::size_t y = img.height() - 1 - row;
    for (std::size_t x = 0; x < img.width(); ++x) {
      for (const double v : img.pixel(x, y)) {
        const auto f = static_cast<float>(v);
        std::uint8_t raw[4];
        std::memcpy(raw, &f, 4);
        out.insert(out.end(), raw, raw + 4);
      }
    }
  }
  return out;
}

LdrImage read_ppm(ByteView bytes) {
  HeaderTokens tokens(bytes);
  if (tokens.next() != "P6") throw Error(Errc::kBadMagic, "expected binary PPM 'P6'");
  const long w = tokens.next_int();
  const long h = tokens.next_int();
  const long maxval = tokens.next_int();
  if (w <= 0 || h <= 0) throw Error(Errc::kBadHeader, "non-positive PPM dimensions");
  if (maxval != 255) {
    throw Error(Errc::kMaxvalUnsupported, "PPM maxval " + std::to_string(maxval) + " (need 255)");
  }
  const std::size_t offset = tokens.payload_offset();
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3;
  if (bytes.size() - offset < count) throw Error(Errc::kTruncatedScanline, "PPM payload ends early");
  return LdrImage(static_cast<std::size_t>(w), static_cast<std::size_t>(h),
                  std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                                            bytes.begin() + static_cast<std::ptrdiff_t>(offset + count)));
}

Bytes write_ppm(const LdrImage& img) {
  Bytes out;
  append_string(out, "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n");
  out.insert(out.end(), img.samples().begin(), img.samples().end());
  return out;
}

LdrImage read_png(ByteView bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(Errc::kBadHeader, std::string("PNG: ") + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw Error(Errc::kBitDepthUnsupported, "PNG has more than 8 bits per channel");
  }
  const bool has_alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  // Reading as RGBA keeps the colour samples untouched; compositing onto a
  // background would alter them.
  image.format = has_alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  const std::size_t stride_px = has_alpha ? 4 : 3;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(Errc::kTruncatedScanline, "PNG: " + msg);
  }
  const std::size_t width = image.width;
  const std::size_t height = image.height;
  if (!has_alpha) return LdrImage(width, height, std::move(buffer));
  std::clog << "warning: PNG alpha channel dropped\n";
  std::vector<std::uint8_t> rgb(width * height * 3);
  for (std::size_t i = 0; i < width * height; ++i) {
    std::memcpy(&rgb[3 * i], &buffer[stride_px * i], 3);
  }
  return LdrImage(width, height, std::move(rgb));
}

namespace {

Bytes encode_png(std::size_t width, std::size_t height, std::uint32_t format, const std::uint8_t* data) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, data, 0, nullptr)) {
    throw Error(Errc::kIo, std::string("PNG encode: ") + image.message);
  }
  Bytes out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, data, 0, nullptr)) {
    throw Error(Errc::kIo, std::string("PNG encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

Bytes write_png(const LdrImage& img) {
  return encode_png(img.width(), img.height(), PNG_FORMAT_RGB, img.samples().data());
}

Bytes write_png_gray(std::size_t width, std::size_t height, std::span<const std::uint8_t> gray) {
  if (gray.size() != width * height) throw Error(Errc::kInvalidImage, "grey buffer size mismatch");
  return encode_png(width, height, PNG_FORMAT_GRAY, gray.data());
}

HdrImage read_hdr(ByteView bytes) {
  if (starts_with(bytes, "#?")) return read_radiance_hdr(bytes);
  if (starts_with(bytes, "PF") || starts_with(bytes, "Pf")) return read_pfm(bytes);
  throw Error(Errc::kBadMagic, "not a Radiance or PFM file");
}

LdrImage read_ldr(ByteView bytes) {
  if (is_png(bytes)) return read_png(bytes);
  if (starts_with(bytes, "P6")) return read_ppm(bytes);
  throw Error(Errc::kBadMagic, "not a binary PPM or PNG file");
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open '" + path.string() + "'");
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::kIo, "read failed for '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot create '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIo, "write failed for '" + path.string() + "'");
}

namespace {

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& parse) {
  const Bytes bytes = read_file(path);
  try {
    return parse(ByteView(bytes));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace

HdrImage load_hdr(const std::filesystem::path& path) {
  return with_path(path, [](ByteView b) { return read_hdr(b); });
}

LdrImage load_ldr(const std::filesystem::path& path) {
  return with_path(path, [](ByteView b) { return read_ldr(b); });
}

}  // namespace tmqi::io
