#include "fft.hpp"

#include <mutex>

#include <fftw3.h>

namespace tmqi::detail {

namespace {

// FFTW planning is not thread-safe; executing an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void run(Spectrum& in, Spectrum& out, std::size_t width, std::size_t height, int sign) {
  auto* src = reinterpret_cast<fftw_complex*>(in.data());
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), src, dst, sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

Spectrum forward_dft(const std::vector<double>& data, std::size_t width, std::size_t height) {
  Spectrum in(data.begin(), data.end());
  Spectrum out(width * height);
  run(in, out, width, height, FFTW_FORWARD);
  return out;
}

void inverse_dft(Spectrum& data, std::size_t width, std::size_t height) {
  Spectrum out(width * height);
  run(data, out, width, height, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(width * height);
  for (std::size_t i = 0; i < out.size(); ++i) data[i] = out[i] * scale;
}

}  // namespace tmqi::detail
