#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "tmqi/image.hpp"

namespace tmqi::phase {

struct FilterBankParams {
  int n_scales = 4;
  int n_orientations = 4;
  double min_wavelength = 3.0;    // pixels, finest scale
  double scale_multiplier = 2.1;  // wavelength ratio between scales
  double sigma_on_f = 0.55;       // radial bandwidth
  // Std (radians) of the angular Gaussian; unset means
  // (pi / n_orientations) / 1.2.
  std::optional<double> angular_sigma;
  // Butterworth low-pass applied to every radial filter to keep the finest
  // scale off the spectrum corners.
  double lowpass_cutoff = 0.45;
  int lowpass_order = 15;

  double resolved_angular_sigma() const;
  void validate() const;

  friend bool operator==(const FilterBankParams&, const FilterBankParams&) = default;
};

/// Smallest accepted plane for the phase pathway.
inline constexpr std::size_t kMinPhaseSize = 8;

/// Radial log-Gabor transfer exp(-(log(f / f0))^2 / (2 log(sigma_on_f)^2));
/// 0 at f = 0.
double log_gabor_radial(double f, double f0, double sigma_on_f);

/// Frequency-domain log-Gabor quadrature bank on a width x height grid
/// (unshifted DFT layout). Each filter is real and one-sided in angle, so the
/// inverse transform of spectrum * filter yields even + i * odd responses.
class LogGaborBank {
 public:
  LogGaborBank(std::size_t width, std::size_t height, const FilterBankParams& params);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  const FilterBankParams& params() const noexcept { return params_; }

  int scales() const noexcept { return params_.n_scales; }
  int orientations() const noexcept { return params_.n_orientations; }

  double centre_frequency(int scale) const;
  double orientation_angle(int orientation) const;

  /// Radial part (log-Gabor times low-pass) at DFT bin (kx, ky).
  double radial(int scale, std::size_t kx, std::size_t ky) const;
  /// Angular Gaussian weight at DFT bin (kx, ky).
  double angular(int orientation, std::size_t kx, std::size_t ky) const;

  /// Transfer function of one scale/orientation pair, row-major over bins.
  std::vector<double> filter(int scale, int orientation) const;

  /// Sum over all scales and orientations. Filtering is linear, so one
  /// inverse transform with this gives the summed even/odd responses.
  const std::vector<double>& combined() const noexcept { return combined_; }

 private:
  double radius(std::size_t kx, std::size_t ky) const;
  double theta(std::size_t kx, std::size_t ky) const;

  std::size_t width_;
  std::size_t height_;
  FilterBankParams params_;
  std::vector<double> combined_;
};

/// Shared, cached bank for a grid size. Throws Errc::kImageTooSmall below
/// kMinPhaseSize on either side.
std::shared_ptr<const LogGaborBank> log_gabor_bank(std::size_t width, std::size_t height,
                                                   const FilterBankParams& params);

/// Locally weighted mean phase angle, one value in [-pi, pi] per pixel.
/// Sign semantics: +pi/2 bright line, -pi/2 dark line, 0 step.
class PhaseMap {
 public:
  PhaseMap() = default;
  explicit PhaseMap(Plane angles) : angles_(std::move(angles)) {}

  std::size_t width() const noexcept { return angles_.width(); }
  std::size_t height() const noexcept { return angles_.height(); }
  double at(std::size_t x, std::size_t y) const { return angles_.at(x, y); }
  const Plane& angles() const noexcept { return angles_; }

  /// -1, 0 or +1 per pixel.
  std::vector<int> sign_map() const;

 private:
  Plane angles_;
};

struct QuadratureSums {
  Plane even;
  Plane odd;
};

/// Summed even/odd responses over the whole bank. The plane mean is removed
/// first, and responses smaller than kResponseFloor times the plane's value
/// range are set to exactly zero.
QuadratureSums quadrature_sums(const Plane& plane, const FilterBankParams& params);

inline constexpr double kResponseFloor = 1e-9;

/// ph = atan2(sum even, sum odd); atan2(0, 0) is 0, so a constant plane maps
/// to all zeros.
PhaseMap lwmpa(const Plane& plane, const FilterBankParams& params = {});

enum class PhaseComparison {
  kSignAgreement,  // fraction of pixels whose phase signs agree
  kCosine,         // mean of (1 + cos(ph_a - ph_b)) / 2
};

struct PhaseParams {
  FilterBankParams bank;
  // HDR reference = w * raw-normalised + (1 - w) * log1p-normalised channel.
  double hdr_linear_weight = 0.5;
  PhaseComparison comparison = PhaseComparison::kSignAgreement;
};

double compare_phase(const PhaseMap& a, const PhaseMap& b, PhaseComparison mode);

/// Reference plane fed to lwmpa() for an HDR channel.
Plane hdr_reference_plane(const Plane& hdr_channel, double linear_weight = 0.5);

/// Similarity in [0, 1] between an HDR channel and the matching LDR channel.
/// Errors: kDimensionMismatch, kImageTooSmall.
double channel_phase_similarity(const Plane& hdr_channel, const Plane& ldr_channel,
                                const PhaseParams& params = {});

struct PhaseScore {
  double q_r = 0.0;
  double q_g = 0.0;
  double q_b = 0.0;
  double l = 0.0;
};

/// Luma-weighted fusion of per-channel scores.
double fuse_channel_scores(double q_r, double q_g, double q_b);

PhaseScore phase_component(const HdrImage& hdr, const LdrImage& ldr, const PhaseParams& params = {});

/// Debug rendering: ph in [-pi/2, pi/2] mapped linearly to [0, 255], clamped.
std::vector<std::uint8_t> phase_to_gray8(const PhaseMap& map);

}  // namespace tmqi::phase
