#include "tmqi/index.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmqi/error.hpp"

namespace tmqi {

double combine_tmqi3(double f, double n, double l) {
  f = std::clamp(f, 0.0, 1.0);
  n = std::clamp(n, 0.0, 1.0);
  l = std::clamp(l, 0.0, 1.0);
  return (f + n + l) / 3.0;
}

double tmqi1(double s, double n, const Tmqi1Params& params) {
  if (!(s >= 0.0 && s <= 1.0) || !(n >= 0.0 && n <= 1.0)) {
    throw Error(Errc::kDomainError, "TMQI-1 inputs must lie in [0, 1] (S=" + std::to_string(s) +
                                        ", N=" + std::to_string(n) + ")");
  }
  if (!(params.a >= 0.0 && params.a <= 1.0) || !(params.alpha > 0.0) || !(params.beta > 0.0)) {
    throw Error(Errc::kDomainError, "TMQI-1 needs 0 <= a <= 1 and positive exponents");
  }
  const double v = params.a * std::pow(s, params.alpha) + (1.0 - params.a) * std::pow(n, params.beta);
  return std::clamp(v, 0.0, 1.0);
}

QualityBreakdown tmqi3(const HdrImage& hdr, const LdrImage& ldr, const MetricParams& params) {
  if (hdr.width() != ldr.width() || hdr.height() != ldr.height()) {
    throw Error(Errc::kDimensionMismatch,
                "HDR " + std::to_string(hdr.width()) + "x" + std::to_string(hdr.height()) + " vs LDR " +
                    std::to_string(ldr.width()) + "x" + std::to_string(ldr.height()));
  }
  const Plane x = normalize_or_zero(luminance(hdr));
  const Plane y = to_grayscale_f64(ldr);

  QualityBreakdown out;
  const fidelity::FidelityResult fid = fidelity::structural_fidelity(x, y, params.fidelity);
  const naturalness::NaturalnessResult nat = naturalness::statistical_naturalness(y, params.naturalness);
  const phase::PhaseScore ph = phase::phase_component(hdr, ldr, params.phase);

  out.s_raw = fid.s;
  out.f = std::clamp(fid.s, 0.0, 1.0);
  out.n = nat.n;
  out.mu = nat.mu;
  out.sigma = nat.sigma;
  out.q_r = ph.q_r;
  out.q_g = ph.q_g;
  out.q_b = ph.q_b;
  out.l = ph.l;
  out.q = combine_tmqi3(out.f, out.n, out.l);
  out.tmqi1 = tmqi1(out.f, out.n, params.tmqi1);
  return out;
}

}  // namespace tmqi
