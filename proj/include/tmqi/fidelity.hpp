#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tmqi/image.hpp"

namespace tmqi::fidelity {

struct FidelityParams {
  int window_size = 11;     // odd, >= 3
  double window_std = 1.5;  // Gaussian window, weights sum to 1
  double c1 = 0.01;
  double c2 = 10.0;
  // Psychometric mapping of local std: Phi((sigma - tau) / theta).
  double sigma_map_tau = 2.0;
  std::optional<double> sigma_map_theta;  // defaults to tau / 3

  double theta() const { return sigma_map_theta.value_or(sigma_map_tau / 3.0); }

  /// Throws Errc::kDomainError on an invalid combination.
  void validate() const;
};

struct FidelityResult {
  double s = 0.0;
  Plane quality_map;  // one S_local per valid window position
};

/// Central-difference step, in code values, of the finite-difference gradient.
inline constexpr double kFiniteDifferenceStep = 0.05;

enum class GradientMethod { kFiniteDifference, kAnalytic };

/// Normalised n x n Gaussian window, row-major.
std::vector<double> gaussian_window(const FidelityParams& params);

/// sigma -> Phi((sigma - tau) / theta); strictly increasing, in (0, 1).
double mapped_local_std(double sigma, const FidelityParams& params);

/// Weighted local moments of one window pair.
struct WindowMoments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double cov = 0.0;
};

WindowMoments window_moments(std::span<const double> patch_x, std::span<const double> patch_y,
                             std::span<const double> weights);

/// S_local from moments. The first factor compares mapped stds, the second
/// is the SSIM structure term; result is clamped to [-1, 1].
/// Identical moments give exactly 1.
double s_local(const WindowMoments& m, const FidelityParams& params);

/// S_local of two equally-shaped weighted windows.
double s_local(std::span<const double> patch_x, std::span<const double> patch_y,
               std::span<const double> weights, const FidelityParams& params);

/// Dense stride-1 sliding window over the valid region (no padding);
/// S is the plain mean of the quality map.
/// Errors: kDimensionMismatch, kImageTooSmall.
FidelityResult structural_fidelity(const Plane& x, const Plane& y, const FidelityParams& params);

/// Gradient of S(x, y) with respect to every pixel of y.
Plane fidelity_gradient(const Plane& x, const Plane& y, const FidelityParams& params,
                        GradientMethod method = GradientMethod::kFiniteDifference,
                        double step = kFiniteDifferenceStep);

/// y + lambda * grad_y S(x, y), clamped to [0, 255].
Plane fidelity_ascent_step(const Plane& x, const Plane& y, double lambda, const FidelityParams& params,
                           GradientMethod method = GradientMethod::kFiniteDifference);

}  // namespace tmqi::fidelity
