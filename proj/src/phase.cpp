#include "tmqi/phase.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "fft.hpp"
#include "parallel.hpp"
#include "tmqi/error.hpp"

namespace tmqi::phase {

namespace {

constexpr double kPi = std::numbers::pi;

double signed_frequency(std::size_t k, std::size_t n) {
  const auto ki = static_cast<double>(k);
  const auto ni = static_cast<double>(n);
  return (k <= (n - 1) / 2 ? ki : ki - ni) / ni;
}

void check_size(std::size_t width, std::size_t height) {
  if (width < kMinPhaseSize || height < kMinPhaseSize) {
    throw Error(Errc::kImageTooSmall, "phase analysis needs at least " + std::to_string(kMinPhaseSize) +
                                          "x" + std::to_string(kMinPhaseSize) + " pixels, got " +
                                          std::to_string(width) + "x" + std::to_string(height));
  }
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

using BankKey = std::tuple<std::size_t, std::size_t, int, int, double, double, double, double, double, int>;

BankKey key_of(std::size_t w, std::size_t h, const FilterBankParams& p) {
  return {w, h, p.n_scales, p.n_orientations, p.min_wavelength, p.scale_multiplier, p.sigma_on_f,
          p.resolved_angular_sigma(), p.lowpass_cutoff, p.lowpass_order};
}

}  // namespace

double FilterBankParams::resolved_angular_sigma() const {
  return angular_sigma.value_or(kPi / static_cast<double>(n_orientations) / 1.2);
}

void FilterBankParams::validate() const {
  if (n_scales < 1 || n_orientations < 1) throw Error(Errc::kDomainError, "bank needs >= 1 scale and orientation");
  if (!(min_wavelength >= 2.0)) throw Error(Errc::kDomainError, "minimum wavelength must be >= 2 pixels");
  if (!(scale_multiplier > 1.0)) throw Error(Errc::kDomainError, "scale multiplier must exceed 1");
  if (!(sigma_on_f > 0.0 && sigma_on_f < 1.0)) throw Error(Errc::kDomainError, "sigma_on_f must lie in (0, 1)");
  if (!(resolved_angular_sigma() > 0.0)) throw Error(Errc::kDomainError, "angular spread must be positive");
  if (!(lowpass_cutoff > 0.0 && lowpass_cutoff <= 0.5) || lowpass_order < 1) {
    throw Error(Errc::kDomainError, "low-pass cutoff must be in (0, 0.5] with order >= 1");
  }
}

double log_gabor_radial(double f, double f0, double sigma_on_f) {
  if (f <= 0.0) return 0.0;
  const double l = std::log(f / f0);
  const double s = std::log(sigma_on_f);
  return std::exp(-(l * l) / (2.0 * s * s));
}

LogGaborBank::LogGaborBank(std::size_t width, std::size_t height, const FilterBankParams& params)
    : width_(width), height_(height), params_(params) {
  check_size(width, height);
  params_.validate();
  combined_.assign(width * height, 0.0);
  std::vector<double> radial_sum(width * height, 0.0);
  std::vector<double> angular_sum(width * height, 0.0);
  for (std::size_t ky = 0; ky < height; ++ky) {
    for (std::size_t kx = 0; kx < width; ++kx) {
      const std::size_t i = ky * width + kx;
      for (int s = 0; s < scales(); ++s) radial_sum[i] += radial(s, kx, ky);
      for (int o = 0; o < orientations(); ++o) angular_sum[i] += angular(o, kx, ky);
      // Each filter is radial(s) * angular(o), so the bank sum factorises.
      combined_[i] = radial_sum[i] * angular_sum[i];
    }
  }
}

double LogGaborBank::radius(std::size_t kx, std::size_t ky) const {
  const double fx = signed_frequency(kx, width_);
  const double fy = signed_frequency(ky, height_);
  return std::hypot(fx, fy);
}

double LogGaborBank::theta(std::size_t kx, std::size_t ky) const {
  // Image rows grow downwards; flip y so angles are counter-clockwise.
  return std::atan2(-signed_frequency(ky, height_), signed_frequency(kx, width_));
}

double LogGaborBank::centre_frequency(int scale) const {
  return 1.0 / (params_.min_wavelength * std::pow(params_.scale_multiplier, scale));
}

double LogGaborBank::orientation_angle(int orientation) const {
  return static_cast<double>(orientation) * kPi / static_cast<double>(params_.n_orientations);
}

double LogGaborBank::radial(int scale, std::size_t kx, std::size_t ky) const {
  if (kx == 0 && ky == 0) return 0.0;
  const double r = radius(kx, ky);
  const double lowpass = 1.0 / (1.0 + std::pow(r / params_.lowpass_cutoff, 2 * params_.lowpass_order));
  return log_gabor_radial(r, centre_frequency(scale), params_.sigma_on_f) * lowpass;
}

double LogGaborBank::angular(int orientation, std::size_t kx, std::size_t ky) const {
  const double t = theta(kx, ky);
  const double a = orientation_angle(orientation);
  const double ds = std::sin(t) * std::cos(a) - std::cos(t) * std::sin(a);
  const double dc = std::cos(t) * std::cos(a) + std::sin(t) * std::sin(a);
  const double dtheta = std::abs(std::atan2(ds, dc));
  const double sigma = params_.resolved_angular_sigma();
  return std::exp(-(dtheta * dtheta) / (2.0 * sigma * sigma));
}

std::vector<double> LogGaborBank::filter(int scale, int orientation) const {
  std::vector<double> out(width_ * height_);
  for (std::size_t ky = 0; ky < height_; ++ky) {
    for (std::size_t kx = 0; kx < width_; ++kx) {
      out[ky * width_ + kx] = radial(scale, kx, ky) * angular(orientation, kx, ky);
    }
  }
  return out;
}

std::shared_ptr<const LogGaborBank> log_gabor_bank(std::size_t width, std::size_t height,
                                                   const FilterBankParams& params) {
  static std::shared_mutex mutex;
  static std::map<BankKey, std::shared_ptr<const LogGaborBank>> cache;
  constexpr std::size_t kMaxCached = 16;

  check_size(width, height);
  params.validate();
  const BankKey key = key_of(width, height, params);
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto bank = std::make_shared<const LogGaborBank>(width, height, params);
  std::unique_lock lock(mutex);
  if (cache.size() >= kMaxCached) cache.clear();
  return cache.emplace(key, std::move(bank)).first->second;
}

std::vector<int> PhaseMap::sign_map() const {
  std::vector<int> signs(angles_.size());
  for (std::size_t i = 0; i < signs.size(); ++i) signs[i] = sign_of(angles_[i]);
  return signs;
}

QuadratureSums quadrature_sums(const Plane& plane, const FilterBankParams& params) {
  const auto bank = log_gabor_bank(plane.width(), plane.height(), params);
  QuadratureSums sums{Plane(plane.width(), plane.height()), Plane(plane.width(), plane.height())};
  const auto [lo, hi] = std::minmax_element(plane.values().begin(), plane.values().end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return sums;

  double mean = 0.0;
  for (const double v : plane.values()) mean += v;
  mean /= static_cast<double>(plane.size());
  std::vector<double> centred(plane.values().begin(), plane.values().end());
  for (double& v : centred) v -= mean;

  detail::Spectrum spectrum = detail::forward_dft(centred, plane.width(), plane.height());
  const std::vector<double>& h = bank->combined();
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= h[i];
  detail::inverse_dft(spectrum, plane.width(), plane.height());

  const double floor = kResponseFloor * range;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double e = spectrum[i].real();
    const double o = spectrum[i].imag();
    sums.even[i] = std::abs(e) < floor ? 0.0 : e;
    sums.odd[i] = std::abs(o) < floor ? 0.0 : o;
  }
  return sums;
}

PhaseMap lwmpa(const Plane& plane, const FilterBankParams& params) {
  const QuadratureSums sums = quadrature_sums(plane, params);
  Plane ph(plane.width(), plane.height());
  for (std::size_t i = 0; i < ph.size(); ++i) {
    ph[i] = std::atan2(sums.even[i], sums.odd[i]);  // atan2(+0, +0) == +0
  }
  return PhaseMap(std::move(ph));
}

double compare_phase(const PhaseMap& a, const PhaseMap& b, PhaseComparison mode) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(Errc::kDimensionMismatch, "phase maps differ in size");
  }
  const std::size_t n = a.angles().size();
  if (n == 0) throw Error(Errc::kInvalidImage, "empty phase map");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pa = a.angles()[i];
    const double pb = b.angles()[i];
    if (mode == PhaseComparison::kSignAgreement) {
      total += sign_of(pa) == sign_of(pb) ? 1.0 : 0.0;
    } else {
      total += 0.5 * (1.0 + std::cos(pa - pb));
    }
  }
  return std::clamp(total / static_cast<double>(n), 0.0, 1.0);
}

Plane hdr_reference_plane(const Plane& hdr_channel, double linear_weight) {
  if (!(linear_weight >= 0.0 && linear_weight <= 1.0)) {
    throw Error(Errc::kDomainError, "linear weight must lie in [0, 1]");
  }
  Plane logged(hdr_channel.width(), hdr_channel.height());
  for (std::size_t i = 0; i < logged.size(); ++i) logged[i] = std::log1p(hdr_channel[i]);
  const Plane lin = normalize_or_zero(hdr_channel);
  const Plane log = normalize_or_zero(logged);
  Plane out(hdr_channel.width(), hdr_channel.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = linear_weight * lin[i] + (1.0 - linear_weight) * log[i];
  }
  return out;
}

double channel_phase_similarity(const Plane& hdr_channel, const Plane& ldr_channel, const PhaseParams& params) {
  if (!hdr_channel.same_shape(ldr_channel)) {
    throw Error(Errc::kDimensionMismatch, "HDR and LDR channels differ in size");
  }
  const PhaseMap ref = lwmpa(hdr_reference_plane(hdr_channel, params.hdr_linear_weight), params.bank);
  const PhaseMap test = lwmpa(ldr_channel, params.bank);
  return compare_phase(ref, test, params.comparison);
}

double fuse_channel_scores(double q_r, double q_g, double q_b) { return luma(q_r, q_g, q_b); }

PhaseScore phase_component(const HdrImage& hdr, const LdrImage& ldr, const PhaseParams& params) {
  if (hdr.width() != ldr.width() || hdr.height() != ldr.height()) {
    throw Error(Errc::kDimensionMismatch,
                "HDR " + std::to_string(hdr.width()) + "x" + std::to_string(hdr.height()) + " vs LDR " +
                    std::to_string(ldr.width()) + "x" + std::to_string(ldr.height()));
  }
  double q[3] = {};
  detail::parallel_for(3, [&](std::size_t c) {
    q[c] = channel_phase_similarity(hdr.channel(static_cast<int>(c)), ldr.channel(static_cast<int>(c)), params);
  });
  return {q[0], q[1], q[2], fuse_channel_scores(q[0], q[1], q[2])};
}

std::vector<std::uint8_t> phase_to_gray8(const PhaseMap& map) {
  std::vector<std::uint8_t> out(map.angles().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = (map.angles()[i] + kPi / 2.0) / kPi;
    out[i] = static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
  }
  return out;
}

}  // namespace tmqi::phase
