// Radiance picture format (.hdr / .pic), RGBE pixels.

#include <cmath>
#include <cstring>
#include <string>
#include <string_view>

#include "tmqi/error.hpp"
#include "tmqi/io.hpp"

namespace tmqi::io {

namespace {

constexpr std::size_t kMinRleWidth = 8;
constexpr std::size_t kMaxRleWidth = 0x7fff;
constexpr int kExponentBias = 128;

class Reader {
 public:
  explicit Reader(ByteView bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ >= bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  // Returns the next line without its terminating '\n'; false at EOF.
  bool line(std::string_view& out) {
    if (at_end()) return false;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
    out = std::string_view(reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start);
    if (pos_ < bytes_.size()) ++pos_;
    return true;
  }

  std::uint8_t byte() { return bytes_[pos_++]; }
  std::uint8_t peek(std::size_t off) const { return bytes_[pos_ + off]; }

 private:
  ByteView bytes_;
  std::size_t pos_ = 0;
};

void parse_resolution(std::string_view line, std::size_t& width, std::size_t& height) {
  char ya[3] = {};
  char xa[3] = {};
  long h = 0;
  long w = 0;
  const std::string text(line);
  if (std::sscanf(text.c_str(), "%2s %ld %2s %ld", ya, &h, xa, &w) != 4) {
    throw Error(Errc::kBadHeader, "malformed resolution line '" + text + "'");
  }
  if (std::strcmp(ya, "-Y") != 0 || std::strcmp(xa, "+X") != 0) {
    throw Error(Errc::kUnsupportedOrientation,
                "only '-Y h +X w' is supported, got '" + text + "'");
  }
  if (h <= 0 || w <= 0) throw Error(Errc::kBadHeader, "non-positive resolution in '" + text + "'");
  width = static_cast<std::size_t>(w);
  height = static_cast<std::size_t>(h);
}

void read_flat_scanline(Reader& in, std::size_t width, std::uint8_t* line) {
  if (in.remaining() < 4 * width) throw Error(Errc::kTruncatedScanline, "flat scanline ends early");
  for (std::size_t i = 0; i < 4 * width; ++i) line[i] = in.byte();
}

// New-style adaptive RLE: a 4-byte marker (2, 2, hi, lo), then each of the
// four components as runs. Count byte > 128 repeats the next byte
// (count - 128) times, otherwise the next count bytes are literal.
void read_rle_scanline(Reader& in, std::size_t width, std::uint8_t* line) {
  if (in.remaining() < 4) throw Error(Errc::kTruncatedScanline, "missing scanline header");
  const std::uint8_t m0 = in.byte();
  const std::uint8_t m1 = in.byte();
  const std::uint8_t hi = in.byte();
  const std::uint8_t lo = in.byte();
  if (m0 != 2 || m1 != 2 || (hi & 0x80) != 0) {
    throw Error(Errc::kBadRleRun, "bad RLE scanline marker");
  }
  const std::size_t declared = (static_cast<std::size_t>(hi) << 8) | lo;
  if (declared != width) {
    throw Error(Errc::kBadRleRun, "RLE scanline width " + std::to_string(declared) +
                                      " does not match image width " + std::to_string(width));
  }
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t x = 0;
    while (x < width) {
      if (in.at_end()) throw Error(Errc::kTruncatedScanline, "RLE scanline ends early");
      std::size_t count = in.byte();
      if (count > 128) {
        count -= 128;
        if (x + count > width) throw Error(Errc::kBadRleRun, "run overruns scanline");
        if (in.at_end()) throw Error(Errc::kTruncatedScanline, "run value missing");
        const std::uint8_t v = in.byte();
        for (std::size_t k = 0; k < count; ++k) line[4 * (x++) + c] = v;
      } else {
        if (count == 0) throw Error(Errc::kBadRleRun, "zero-length literal run");
        if (x + count > width) throw Error(Errc::kBadRleRun, "literal overruns scanline");
        if (in.remaining() < count) throw Error(Errc::kTruncatedScanline, "literal run ends early");
        for (std::size_t k = 0; k < count; ++k) line[4 * (x++) + c] = in.byte();
      }
    }
  }
}

void append_header(Bytes& out, std::size_t width, std::size_t height) {
  const std::string header = "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " + std::to_string(height) +
                             " +X " + std::to_string(width) + "\n";
  out.insert(out.end(), header.begin(), header.end());
}

void append_rle_component(Bytes& out, const std::uint8_t* data, std::size_t width) {
  // Runs of >= 4 equal bytes are worth a run; shorter stretches go literal.
  std::size_t x = 0;
  while (x < width) {
    std::size_t run_start = x;
    std::size_t run_len = 0;
    while (run_start < width) {
      run_len = 1;
      while (run_start + run_len < width && run_len < 127 &&
             data[4 * (run_start + run_len)] == data[4 * run_start]) {
        ++run_len;
      }
      if (run_len >= 4) break;
      run_start += run_len;
    }
    if (run_start >= width) run_len = 0;
    while (x < run_start) {
      const std::size_t n = std::min<std::size_t>(128, run_start - x);
      out.push_back(static_cast<std::uint8_t>(n));
      for (std::size_t k = 0; k < n; ++k) out.push_back(data[4 * (x + k)]);
      x += n;
    }
    if (run_len >= 4) {
      out.push_back(static_cast<std::uint8_t>(128 + run_len));
      out.push_back(data[4 * run_start]);
      x += run_len;
    }
  }
}

}  // namespace

std::array<double, 3> rgbe_decode(Rgbe p) {
  if (p.e == 0) return {0.0, 0.0, 0.0};
  const int shift = static_cast<int>(p.e) - (kExponentBias + 8);
  return {std::ldexp(p.r + 0.5, shift), std::ldexp(p.g + 0.5, shift),
          std::ldexp(p.b + 0.5, shift)};
}

Rgbe rgbe_encode(double r, double g, double b) {
  if (!std::isfinite(r) || !std::isfinite(g) || !std::isfinite(b)) {
    throw Error(Errc::kNonFiniteSample, "cannot encode non-finite sample");
  }
  if (r < 0.0 || g < 0.0 || b < 0.0) throw Error(Errc::kInvalidImage, "cannot encode negative sample");
  const double v = std::max(r, std::max(g, b));
  if (v == 0.0) return {};
  int exp = 0;
  std::frexp(v, &exp);  // v = f * 2^exp, f in [0.5, 1)
  const int e = exp + kExponentBias;
  if (e < 1) return {};
  if (e > 255) return {255, 255, 255, 255};
  auto mant = [exp](double c) {
    return static_cast<std::uint8_t>(std::min(255.0, std::floor(std::ldexp(c, 8 - exp))));
  };
  return {mant(r), mant(g), mant(b), static_cast<std::uint8_t>(e)};
}

HdrImage read_radiance_hdr(ByteView bytes) {
  Reader in(bytes);
  std::string_view line;
  if (!in.line(line) || !(line == "#?RADIANCE" || line == "#?RGBE")) {
    throw Error(Errc::kBadMagic, "expected '#?RADIANCE' or '#?RGBE'");
  }
  for (;;) {
    if (!in.line(line)) throw Error(Errc::kBadHeader, "header is not terminated by a blank line");
    if (line.empty()) break;
    if (line.starts_with("FORMAT=") && line != "FORMAT=32-bit_rle_rgbe") {
      throw Error(Errc::kBadHeader, "unsupported pixel format '" + std::string(line) + "'");
    }
  }
  if (!in.line(line)) throw Error(Errc::kBadHeader, "missing resolution line");
  std::size_t width = 0;
  std::size_t height = 0;
  parse_resolution(line, width, height);

  std::vector<double> rgb(width * height * 3);
  std::vector<std::uint8_t> scan(4 * width);
  for (std::size_t y = 0; y < height; ++y) {
    // A flat scanline can start with bytes that look like an RLE marker only
    // if they also spell out the image width, which writers avoid.
    const bool rle = width >= kMinRleWidth && width <= kMaxRleWidth && in.remaining() >= 4 &&
                     in.peek(0) == 2 && in.peek(1) == 2 && (in.peek(2) & 0x80) == 0;
    if (rle) {
      read_rle_scanline(in, width, scan.data());
    } else {
      read_flat_scanline(in, width, scan.data());
    }
    for (std::size_t x = 0; x < width; ++x) {
      const auto px = rgbe_decode({scan[4 * x], scan[4 * x + 1], scan[4 * x + 2], scan[4 * x + 3]});
      std::copy(px.begin(), px.end(), rgb.begin() + static_cast<std::ptrdiff_t>(3 * (y * width + x)));
    }
  }
  return HdrImage(width, height, std::move(rgb));
}

Bytes write_radiance_hdr(const HdrImage& img, ScanlineEncoding encoding) {
  const std::size_t width = img.width();
  Bytes out;
  append_header(out, width, img.height());
  const bool rle =
      encoding == ScanlineEncoding::kRle && width >= kMinRleWidth && width <= kMaxRleWidth;
  std::vector<std::uint8_t> scan(4 * width);
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const auto px = img.pixel(x, y);
      const Rgbe p = rgbe_encode(px[0], px[1], px[2]);
      scan[4 * x] = p.r;
      scan[4 * x + 1] = p.g;
      scan[4 * x + 2] = p.b;
      scan[4 * x + 3] = p.e;
    }
    if (!rle) {
      out.insert(out.end(), scan.begin(), scan.end());
      continue;
    }
    out.push_back(2);
    out.push_back(2);
    out.push_back(static_cast<std::uint8_t>(width >> 8));
    out.push_back(static_cast<std::uint8_t>(width & 0xff));
    for (std::size_t c = 0; c < 4; ++c) append_rle_component(out, scan.data() + c, width);
  }
  return out;
}

}  // namespace tmqi::io
