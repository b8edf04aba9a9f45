#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tmqi::detail {

using Spectrum = std::vector<std::complex<double>>;

// 2-D DFT of a real row-major raster (height rows of width samples).
Spectrum forward_dft(const std::vector<double>& data, std::size_t width, std::size_t height);

// In-place inverse DFT, scaled by 1 / (width * height).
void inverse_dft(Spectrum& data, std::size_t width, std::size_t height);

}  // namespace tmqi::detail
