#include "tmqi/naturalness.hpp"

#include <algorithm>
#include <cmath>

#include "tmqi/error.hpp"
#include "tmqi/normal.hpp"

namespace tmqi::naturalness {

NaturalnessModel::NaturalnessModel(const NaturalnessParams& p)
    : mu_r_(p.mu_r),
      sigma_r_(p.sigma_r),
      t1_(p.t1.value_or(p.mu_r)),
      t2_(p.t2.value_or(p.mu_r)),
      t3_(p.t3.value_or(p.sigma_r)),
      t4_(p.t4.value_or(p.sigma_r)),
      theta1_(p.theta1),
      theta2_(p.theta2),
      theta3_(p.theta3),
      theta4_(p.theta4),
      mu_e_(p.mu_e.value_or(p.mu_r)),
      sigma_e_(p.sigma_e.value_or(p.sigma_r)),
      k_(0.0) {
  for (const double v : {mu_r_, sigma_r_, t1_, t2_, t3_, t4_, mu_e_, sigma_e_}) {
    if (!std::isfinite(v)) throw Error(Errc::kDomainError, "naturalness parameters must be finite");
  }
  if (!(sigma_r_ > 0.0)) throw Error(Errc::kDomainError, "reference contrast sigma_r must be positive");
  for (const double theta : {theta1_, theta2_, theta3_, theta4_}) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
      throw Error(Errc::kDomainError, "naturalness spreads must be positive");
    }
  }
  k_ = p.k.value_or(pm(mu_r_) * pd(sigma_r_));
  if (!(k_ > 0.0) || !std::isfinite(k_)) throw Error(Errc::kDomainError, "normaliser K must be positive");
}

double NaturalnessModel::pm(double mu) const {
  if (mu <= mu_e_) return normal_cdf((mu - t1_) / theta1_);
  return normal_cdf((2.0 * mu_r_ - mu - t2_) / theta2_);
}

double NaturalnessModel::pd(double sigma) const {
  if (sigma <= sigma_e_) return normal_cdf((sigma - t3_) / theta3_);
  return normal_cdf((2.0 * sigma_r_ - sigma - t4_) / theta4_);
}

NaturalnessResult NaturalnessModel::evaluate(const Plane& y) const {
  if (y.size() == 0) throw Error(Errc::kInvalidImage, "empty luminance plane");
  const auto count = static_cast<double>(y.size());
  double sum = 0.0;
  for (const double v : y.values()) sum += v;
  const double mu = sum / count;
  double ss = 0.0;
  for (const double v : y.values()) ss += (v - mu) * (v - mu);
  const double sigma = std::sqrt(ss / count);

  NaturalnessResult r;
  r.mu = mu;
  r.sigma = sigma;
  r.pm = pm(mu);
  r.pd = pd(sigma);
  r.n = std::clamp(r.pm * r.pd / k_, 0.0, 1.0);
  return r;
}

double pm(double mu, const NaturalnessParams& params) { return NaturalnessModel(params).pm(mu); }

double pd(double sigma, const NaturalnessParams& params) { return NaturalnessModel(params).pd(sigma); }

NaturalnessResult statistical_naturalness(const Plane& y, const NaturalnessParams& params) {
  return NaturalnessModel(params).evaluate(y);
}

}  // namespace tmqi::naturalness
