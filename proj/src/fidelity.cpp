#include "tmqi/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "tmqi/error.hpp"
#include "tmqi/normal.hpp"

namespace tmqi::fidelity {

namespace {

constexpr double kFlatWindowTolerance = 1e-9;

void check_inputs(const Plane& x, const Plane& y, const FidelityParams& params) {
  params.validate();
  if (!x.same_shape(y)) {
    throw Error(Errc::kDimensionMismatch,
                std::to_string(x.width()) + "x" + std::to_string(x.height()) + " vs " +
                    std::to_string(y.width()) + "x" + std::to_string(y.height()));
  }
  const auto n = static_cast<std::size_t>(params.window_size);
  if (x.width() < n || x.height() < n) {
    throw Error(Errc::kImageTooSmall, "image " + std::to_string(x.width()) + "x" +
                                          std::to_string(x.height()) + " is smaller than the " +
                                          std::to_string(n) + "x" + std::to_string(n) + " window");
  }
}

// Moments of every valid window, laid out like the quality map.
struct MomentField {
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::vector<WindowMoments> moments;
};

WindowMoments moments_at(const Plane& x, const Plane& y, std::span<const double> w, std::size_t n,
                         std::size_t wx, std::size_t wy) {
  WindowMoments m;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double wk = w[j * n + i];
      m.mean_x += wk * x.at(wx + i, wy + j);
      m.mean_y += wk * y.at(wx + i, wy + j);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double wk = w[j * n + i];
      const double dx = x.at(wx + i, wy + j) - m.mean_x;
      const double dy = y.at(wx + i, wy + j) - m.mean_y;
      m.var_x += wk * dx * dx;
      m.var_y += wk * dy * dy;
      m.cov += wk * dx * dy;
    }
  }
  return m;
}

MomentField moment_field(const Plane& x, const Plane& y, const FidelityParams& params,
                         std::span<const double> w) {
  const auto n = static_cast<std::size_t>(params.window_size);
  MomentField field;
  field.cols = x.width() - n + 1;
  field.rows = x.height() - n + 1;
  field.moments.resize(field.cols * field.rows);
  detail::parallel_for(field.rows, [&](std::size_t wy) {
    for (std::size_t wx = 0; wx < field.cols; ++wx) {
      field.moments[wy * field.cols + wx] = moments_at(x, y, w, n, wx, wy);
    }
  });
  return field;
}

Plane finite_difference_gradient(const Plane& x, const Plane& y, const FidelityParams& params,
                                 std::span<const double> w, double h) {
  const auto n = static_cast<std::size_t>(params.window_size);
  const MomentField field = moment_field(x, y, params, w);
  const double inv_m = 1.0 / static_cast<double>(field.moments.size());
  Plane grad(y.width(), y.height());
  // Perturbing y_p by d moves only the windows covering p, and their moments
  // shift in closed form:
  //   mean_y += w d, var_y += 2 w d (y_p - mean_y) + w (1 - w) d^2,
  //   cov    += w d (x_p - mean_x).
  detail::parallel_for(y.height(), [&](std::size_t py) {
    const std::size_t wy_lo = py + 1 >= n ? py + 1 - n : 0;
    const std::size_t wy_hi = std::min(py, field.rows - 1);
    for (std::size_t px = 0; px < y.width(); ++px) {
      const std::size_t wx_lo = px + 1 >= n ? px + 1 - n : 0;
      const std::size_t wx_hi = std::min(px, field.cols - 1);
      double diff = 0.0;
      for (std::size_t wy = wy_lo; wy <= wy_hi; ++wy) {
        for (std::size_t wx = wx_lo; wx <= wx_hi; ++wx) {
          const WindowMoments& m = field.moments[wy * field.cols + wx];
          const double wk = w[(py - wy) * n + (px - wx)];
          const double ry = y.at(px, py) - m.mean_y;
          const double rx = x.at(px, py) - m.mean_x;
          auto shifted = [&](double d) {
            WindowMoments s = m;
            s.mean_y += wk * d;
            s.var_y = std::max(0.0, m.var_y + 2.0 * wk * d * ry + wk * (1.0 - wk) * d * d);
            s.cov += wk * d * rx;
            return s_local(s, params);
          };
          diff += shifted(h) - shifted(-h);
        }
      }
      grad.at(px, py) = diff / (2.0 * h) * inv_m;
    }
  });
  return grad;
}

Plane analytic_gradient(const Plane& x, const Plane& y, const FidelityParams& params,
                        std::span<const double> w) {
  const auto n = static_cast<std::size_t>(params.window_size);
  const MomentField field = moment_field(x, y, params, w);
  const double inv_m = 1.0 / static_cast<double>(field.moments.size());
  const double tau = params.sigma_map_tau;
  const double theta = params.theta();

  // Per window: dS/dy_p = k_var * 2 w_p (y_p - mean_y) + k_cov * w_p (x_p - mean_x).
  std::vector<double> k_var(field.moments.size());
  std::vector<double> k_cov(field.moments.size());
  for (std::size_t k = 0; k < field.moments.size(); ++k) {
    const WindowMoments& m = field.moments[k];
    const double sx = std::sqrt(m.var_x);
    const double sy = std::sqrt(m.var_y);
    const double mx = mapped_local_std(sx, params);
    const double my = mapped_local_std(sy, params);
    const double a_num = 2.0 * mx * my + params.c1;
    const double a_den = mx * mx + my * my + params.c1;
    const double a = a_num / a_den;
    const double b_num = m.cov + params.c2;
    const double b_den = std::sqrt(m.var_x * m.var_y) + params.c2;
    const double b = b_num / b_den;

    const double da_dmy = (2.0 * mx * a_den - a_num * 2.0 * my) / (a_den * a_den);
    const double dmy_dsy = normal_pdf((sy - tau) / theta) / theta;
    const double db_dsy = -b_num * sx / (b_den * b_den);
    // sigma_y = sqrt(var_y) has no derivative on a flat window, and the
    // central difference sees a symmetric kink there. Round-off in the mean
    // leaves var_y slightly above zero, so flatness is judged with a margin.
    const bool flat = sy <= kFlatWindowTolerance * (1.0 + std::abs(m.mean_y));
    const double dsy_dvar = flat ? 0.0 : 0.5 / sy;
    k_var[k] = (da_dmy * dmy_dsy * b + a * db_dsy) * dsy_dvar;
    k_cov[k] = a / b_den;
  }

  Plane grad(y.width(), y.height());
  detail::parallel_for(y.height(), [&](std::size_t py) {
    const std::size_t wy_lo = py + 1 >= n ? py + 1 - n : 0;
    const std::size_t wy_hi = std::min(py, field.rows - 1);
    for (std::size_t px = 0; px < y.width(); ++px) {
      const std::size_t wx_lo = px + 1 >= n ? px + 1 - n : 0;
      const std::size_t wx_hi = std::min(px, field.cols - 1);
      double g = 0.0;
      for (std::size_t wy = wy_lo; wy <= wy_hi; ++wy) {
        for (std::size_t wx = wx_lo; wx <= wx_hi; ++wx) {
          const std::size_t k = wy * field.cols + wx;
          const WindowMoments& m = field.moments[k];
          const double wk = w[(py - wy) * n + (px - wx)];
          g += k_var[k] * 2.0 * wk * (y.at(px, py) - m.mean_y) + k_cov[k] * wk * (x.at(px, py) - m.mean_x);
        }
      }
      grad.at(px, py) = g * inv_m;
    }
  });
  return grad;
}

}  // namespace

void FidelityParams::validate() const {
  if (window_size < 3 || window_size % 2 == 0) {
    throw Error(Errc::kDomainError, "window size must be odd and >= 3, got " + std::to_string(window_size));
  }
  if (!(window_std > 0.0)) throw Error(Errc::kDomainError, "window std must be positive");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error(Errc::kDomainError, "C1 and C2 must be positive");
  if (!std::isfinite(sigma_map_tau)) throw Error(Errc::kDomainError, "tau must be finite");
  if (!(theta() > 0.0)) throw Error(Errc::kDomainError, "sigma mapping theta must be positive");
}

std::vector<double> gaussian_window(const FidelityParams& params) {
  const auto n = static_cast<std::size_t>(params.window_size);
  const double centre = 0.5 * static_cast<double>(n - 1);
  const double denom = 2.0 * params.window_std * params.window_std;
  std::vector<double> w(n * n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = static_cast<double>(i) - centre;
      const double dy = static_cast<double>(j) - centre;
      w[j * n + i] = std::exp(-(dx * dx + dy * dy) / denom);
      total += w[j * n + i];
    }
  }
  for (double& v : w) v /= total;
  return w;
}

double mapped_local_std(double sigma, const FidelityParams& params) {
  return normal_cdf((sigma - params.sigma_map_tau) / params.theta());
}

WindowMoments window_moments(std::span<const double> patch_x, std::span<const double> patch_y,
                             std::span<const double> weights) {
  if (patch_x.size() != patch_y.size() || patch_x.size() != weights.size()) {
    throw Error(Errc::kDimensionMismatch, "patch and weight sizes differ");
  }
  WindowMoments m;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    m.mean_x += weights[k] * patch_x[k];
    m.mean_y += weights[k] * patch_y[k];
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double dx = patch_x[k] - m.mean_x;
    const double dy = patch_y[k] - m.mean_y;
    m.var_x += weights[k] * dx * dx;
    m.var_y += weights[k] * dy * dy;
    m.cov += weights[k] * dx * dy;
  }
  return m;
}

double s_local(const WindowMoments& m, const FidelityParams& params) {
  const double mx = mapped_local_std(std::sqrt(m.var_x), params);
  const double my = mapped_local_std(std::sqrt(m.var_y), params);
  // 2*mx*my and mx*mx + my*my are both exactly 2*mx^2 when mx == my, and
  // sqrt(v*v) == v for binary64, so equal moments give exactly 1.
  const double contrast = (2.0 * mx * my + params.c1) / (mx * mx + my * my + params.c1);
  const double structure = (m.cov + params.c2) / (std::sqrt(m.var_x * m.var_y) + params.c2);
  return std::clamp(contrast * structure, -1.0, 1.0);
}

double s_local(std::span<const double> patch_x, std::span<const double> patch_y,
               std::span<const double> weights, const FidelityParams& params) {
  return s_local(window_moments(patch_x, patch_y, weights), params);
}

FidelityResult structural_fidelity(const Plane& x, const Plane& y, const FidelityParams& params) {
  check_inputs(x, y, params);
  const std::vector<double> w = gaussian_window(params);
  const MomentField field = moment_field(x, y, params, w);
  FidelityResult result{0.0, Plane(field.cols, field.rows)};
  for (std::size_t k = 0; k < field.moments.size(); ++k) {
    result.quality_map[k] = s_local(field.moments[k], params);
  }
  double sum = 0.0;
  for (const double v : result.quality_map.values()) sum += v;
  result.s = sum / static_cast<double>(result.quality_map.size());
  return result;
}

Plane fidelity_gradient(const Plane& x, const Plane& y, const FidelityParams& params,
                        GradientMethod method, double step) {
  check_inputs(x, y, params);
  const std::vector<double> w = gaussian_window(params);
  if (method == GradientMethod::kAnalytic) return analytic_gradient(x, y, params, w);
  if (!(step > 0.0)) throw Error(Errc::kDomainError, "finite-difference step must be positive");
  return finite_difference_gradient(x, y, params, w, step);
}

Plane fidelity_ascent_step(const Plane& x, const Plane& y, double lambda, const FidelityParams& params,
                           GradientMethod method) {
  if (!x.same_shape(y)) {
    throw Error(Errc::kDimensionMismatch, "HDR and LDR planes differ in size");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw Error(Errc::kDomainError, "step size must be finite and non-negative");
  }
  if (lambda == 0.0) return y;
  const Plane grad = fidelity_gradient(x, y, params, method);
  Plane out(y.width(), y.height());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = std::clamp(y[i] + lambda * grad[i], 0.0, 255.0);
  }
  return out;
}

}  // namespace tmqi::fidelity
