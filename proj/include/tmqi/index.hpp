#pragma once

#include "tmqi/fidelity.hpp"
#include "tmqi/image.hpp"
#include "tmqi/naturalness.hpp"
#include "tmqi/phase.hpp"

namespace tmqi {

struct Tmqi1Params {
  double a = 0.8012;
  double alpha = 0.3046;
  double beta = 0.7088;
};

/// Everything the full metric needs.
struct MetricParams {
  fidelity::FidelityParams fidelity;
  naturalness::NaturalnessParams naturalness;
  phase::PhaseParams phase;
  Tmqi1Params tmqi1;
};

struct QualityBreakdown {
  double f = 0.0;      // structural fidelity, clamp(S, 0, 1)
  double n = 0.0;      // statistical naturalness
  double l = 0.0;      // luma-fused phase similarity
  double q = 0.0;      // (F + N + L) / 3
  double tmqi1 = 0.0;  // baseline a * F^alpha + (1 - a) * N^beta

  // Diagnostics.
  double s_raw = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double q_r = 0.0;
  double q_g = 0.0;
  double q_b = 0.0;
};

/// Equal-weight fusion; components are clamped to [0, 1] first.
double combine_tmqi3(double f, double n, double l);

/// a * S^alpha + (1 - a) * N^beta. Errc::kDomainError when S or N fall
/// outside [0, 1] or the parameters are invalid.
double tmqi1(double s, double n, const Tmqi1Params& params = {});

/// Full breakdown for one HDR/LDR pair. F uses the HDR luminance mapped to
/// [0, 255] (all zeros for a constant reference); N looks at the LDR only;
/// L comes from the per-channel phase maps.
QualityBreakdown tmqi3(const HdrImage& hdr, const LdrImage& ldr, const MetricParams& params = {});

}  // namespace tmqi
