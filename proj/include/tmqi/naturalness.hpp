#pragma once

#include <optional>

#include "tmqi/image.hpp"

namespace tmqi::naturalness {

// Brightness (mean) and contrast (std) plausibility of an LDR image, each a
// Gaussian CDF reflected about a reference point. Unset thresholds default
// to the reference statistics; unset K is Pm(mu_r) * Pd(sigma_r) so the best
// attainable N is 1.
struct NaturalnessParams {
  double mu_r = 116.0;
  double sigma_r = 64.0;
  double theta1 = 28.0;
  double theta2 = 28.0;
  double theta3 = 13.0;
  double theta4 = 13.0;
  std::optional<double> t1;  // default mu_r
  std::optional<double> t2;  // default mu_r
  std::optional<double> t3;  // default sigma_r
  std::optional<double> t4;  // default sigma_r
  std::optional<double> mu_e;     // reflection switch for Pm, default mu_r
  std::optional<double> sigma_e;  // reflection switch for Pd, default sigma_r
  std::optional<double> k;
};

struct NaturalnessResult {
  double n = 0.0;
  double pm = 0.0;
  double pd = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
};

/// Parameters with every default resolved; construction validates
/// (all thetas and K positive, else Errc::kDomainError).
class NaturalnessModel {
 public:
  explicit NaturalnessModel(const NaturalnessParams& params = {});

  double pm(double mu) const;
  double pd(double sigma) const;
  double k() const { return k_; }

  double mu_switch() const { return mu_e_; }
  double sigma_switch() const { return sigma_e_; }

  /// Population mean/std of the plane, then N = Pm * Pd / K clamped to [0, 1].
  NaturalnessResult evaluate(const Plane& ldr_luminance) const;

 private:
  double mu_r_, sigma_r_;
  double t1_, t2_, t3_, t4_;
  double theta1_, theta2_, theta3_, theta4_;
  double mu_e_, sigma_e_;
  double k_;
};

double pm(double mu, const NaturalnessParams& params = {});
double pd(double sigma, const NaturalnessParams& params = {});
NaturalnessResult statistical_naturalness(const Plane& ldr_luminance, const NaturalnessParams& params = {});

}  // namespace tmqi::naturalness
