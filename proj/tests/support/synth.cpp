#include "support/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace tmqi::testing {

namespace {

double log_average(const Plane& l) {
  double acc = 0.0;
  for (const double v : l.values()) acc += std::log(1e-6 + v);
  return std::exp(acc / static_cast<double>(l.size()));
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); }

void box_blur(std::vector<double>& v, std::size_t w, std::size_t h, int r) {
  std::vector<double> tmp(v.size());
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double s = 0.0;
      int n = 0;
      for (int d = -r; d <= r; ++d) {
        const long xx = static_cast<long>(x) + d;
        if (xx < 0 || xx >= static_cast<long>(w)) continue;
        s += v[y * w + xx];
        ++n;
      }
      tmp[y * w + x] = s / n;
    }
  }
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double s = 0.0;
      int n = 0;
      for (int d = -r; d <= r; ++d) {
        const long yy = static_cast<long>(y) + d;
        if (yy < 0 || yy >= static_cast<long>(h)) continue;
        s += tmp[yy * w + x];
        ++n;
      }
      v[y * w + x] = s / n;
    }
  }
}

}  // namespace

HdrImage synthetic_scene(std::size_t width, std::size_t height, std::uint64_t seed, double dynamic_range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);

  std::vector<double> lum(width * height);
  std::vector<double> tint(3 * width * height, 1.0);

  const double gx = u(rng) * 2.0 - 1.0;
  const double gy = u(rng) * 2.0 - 1.0;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      lum[y * width + x] = 4.0 + 2.5 * gx * (x / w - 0.5) + 2.5 * gy * (y / h - 0.5);
    }
  }

  // Rectangles with their own reflectance, tint and texture.
  const int n_rects = 4 + static_cast<int>(u(rng) * 4);
  for (int k = 0; k < n_rects; ++k) {
    const double x0 = u(rng) * w * 0.8;
    const double y0 = u(rng) * h * 0.8;
    const double x1 = x0 + (0.15 + 0.5 * u(rng)) * w;
    const double y1 = y0 + (0.15 + 0.5 * u(rng)) * h;
    const double refl = std::exp(std::log(0.1) + u(rng) * std::log(30.0));
    const double tr = 0.6 + 0.8 * u(rng);
    const double tg = 0.6 + 0.8 * u(rng);
    const double tb = 0.6 + 0.8 * u(rng);
    const double fx = (u(rng) - 0.5) * 1.2;
    const double fy = (u(rng) - 0.5) * 1.2;
    const double ph = u(rng) * 2.0 * std::numbers::pi;
    const double amp = 0.1 + 0.4 * u(rng);
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        if (x < x0 || x >= x1 || y < y0 || y >= y1) continue;
        const std::size_t i = y * width + x;
        lum[i] *= refl * (1.0 + amp * std::sin(fx * x + fy * y + ph));
        tint[3 * i] = tr;
        tint[3 * i + 1] = tg;
        tint[3 * i + 2] = tb;
      }
    }
  }

  // Deep shadow.
  {
    const double x0 = u(rng) * w * 0.6;
    const double y0 = u(rng) * h * 0.6;
    const double x1 = x0 + 0.3 * w;
    const double y1 = y0 + 0.3 * h;
    const double depth = 1.0 / std::sqrt(dynamic_range);
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        if (x >= x0 && x < x1 && y >= y0 && y < y1) lum[y * width + x] *= depth * 10.0;
      }
    }
  }

  // Fine-grained surface noise, smoothed so it reads as texture.
  {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> grain(width * height);
    for (double& v : grain) v = g(rng);
    box_blur(grain, width, height, 1);
    for (std::size_t i = 0; i < lum.size(); ++i) lum[i] *= std::exp(0.15 * grain[i]);
  }

  // Light sources.
  double peak = *std::max_element(lum.begin(), lum.end());
  const int n_lights = 1 + static_cast<int>(u(rng) * 3);
  for (int k = 0; k < n_lights; ++k) {
    const double cx = u(rng) * w;
    const double cy = u(rng) * h;
    const double r = (0.03 + 0.06 * u(rng)) * std::min(w, h);
    const double a = peak * std::sqrt(dynamic_range) * (0.3 + u(rng));
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        lum[y * width + x] += a * std::exp(-d2 / (2.0 * r * r));
      }
    }
  }

  std::vector<double> rgb(3 * width * height);
  for (std::size_t i = 0; i < lum.size(); ++i) {
    const double l = std::max(lum[i], 1e-4);
    for (int c = 0; c < 3; ++c) rgb[3 * i + c] = l * tint[3 * i + c];
  }
  return HdrImage(width, height, std::move(rgb));
}

LdrImage render(const HdrImage& hdr, Tmo tmo, double param) {
  const Plane l = luminance(hdr);
  const double lmax = *std::max_element(l.values().begin(), l.values().end());
  const double lav = log_average(l);
  std::vector<std::uint8_t> out(3 * l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double li = std::max(l[i], 1e-9);
    double ld = 0.0;
    bool encode_gamma = false;
    switch (tmo) {
      case Tmo::kLog: {
        const double s = param / lav;
        ld = std::log1p(li * s) / std::log1p(lmax * s);
        break;
      }
      case Tmo::kGamma:
        ld = std::pow(li / lmax, 1.0 / param);
        break;
      case Tmo::kReinhard: {
        const double lm = 0.18 * param * li / lav;
        ld = lm / (1.0 + lm);
        encode_gamma = true;
        break;
      }
      case Tmo::kLinearClip:
        ld = std::min(1.0, 0.18 * param * li / lav);
        encode_gamma = true;
        break;
    }
    for (int c = 0; c < 3; ++c) {
      const double ratio = hdr.samples()[3 * i + c] / li;
      double v = std::pow(ratio, 0.6) * ld;
      if (encode_gamma) v = std::pow(std::clamp(v, 0.0, 1.0), 1.0 / 2.2);
      out[3 * i + c] = to_byte(255.0 * v);
    }
  }
  return LdrImage(hdr.width(), hdr.height(), std::move(out));
}

LdrImage match_stats(const LdrImage& ldr, double mean, double stdev) {
  const Plane y0 = luminance(ldr);
  const double m0 = plane_mean(y0);
  const double s0 = std::max(plane_std(y0), 1e-6);
  double gain = stdev / s0;
  double offset = mean - m0;
  std::vector<std::uint8_t> out(ldr.samples().size());
  for (int iter = 0; iter < 40; ++iter) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = to_byte(gain * (ldr.samples()[k] - m0) + m0 + offset);
    const LdrImage cur(ldr.width(), ldr.height(), out);
    const Plane y = luminance(cur);
    const double m = plane_mean(y);
    const double s = std::max(plane_std(y), 1e-6);
    if (std::abs(m - mean) < 0.05 && std::abs(s - stdev) < 0.05) break;
    gain *= std::pow(stdev / s, 0.8);
    offset += 0.8 * (mean - m);
  }
  return LdrImage(ldr.width(), ldr.height(), std::move(out));
}

LdrImage add_gaussian_noise(const LdrImage& ldr, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<std::uint8_t> out(ldr.samples().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = to_byte(ldr.samples()[k] + g(rng));
  return LdrImage(ldr.width(), ldr.height(), std::move(out));
}

LdrImage hard_clip(const LdrImage& ldr, std::uint8_t lo, std::uint8_t hi) {
  std::vector<std::uint8_t> out(ldr.samples().begin(), ldr.samples().end());
  for (auto& v : out) v = std::clamp(v, lo, hi);
  return LdrImage(ldr.width(), ldr.height(), std::move(out));
}

Plane random_plane(std::size_t width, std::size_t height, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Plane p(width, height);
  for (double& v : p.values()) v = u(rng);
  return p;
}

Plane smooth_plane(std::size_t width, std::size_t height, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> acc(width * height, 0.0);
  for (int r : {1, 2, 4}) {
    std::vector<double> layer(width * height);
    for (double& v : layer) v = g(rng);
    box_blur(layer, width, height, r);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += layer[i] * r;
  }
  const auto [mn, mx] = std::minmax_element(acc.begin(), acc.end());
  const double a = *mn;
  const double span = std::max(*mx - a, 1e-12);
  Plane p(width, height);
  for (std::size_t i = 0; i < acc.size(); ++i) p[i] = lo + (hi - lo) * (acc[i] - a) / span;
  return p;
}

double plane_mean(const Plane& p) {
  double s = 0.0;
  for (const double v : p.values()) s += v;
  return s / static_cast<double>(p.size());
}

double plane_std(const Plane& p) {
  const double m = plane_mean(p);
  double s = 0.0;
  for (const double v : p.values()) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(p.size()));
}

std::vector<FixturePair> fixture_corpus(std::size_t size, std::size_t count) {
  static constexpr Tmo kCycle[] = {Tmo::kLog, Tmo::kReinhard, Tmo::kGamma, Tmo::kLinearClip};
  static constexpr double kParam[] = {4.0, 1.0, 2.2, 1.0};
  std::vector<FixturePair> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    HdrImage hdr = synthetic_scene(size, size, 1000 + k);
    LdrImage ldr = match_stats(render(hdr, kCycle[k % 4], kParam[k % 4]), 116.0, 64.0);
    out.push_back({std::move(hdr), std::move(ldr)});
  }
  return out;
}

}  // namespace tmqi::testing
