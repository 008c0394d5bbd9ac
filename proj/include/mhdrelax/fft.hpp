#pragma once

#include <complex>
#include <span>

namespace mhdrelax::fft {

enum class Direction { forward, backward };

/// In-place unnormalized 2D complex transform of an m x m row-major array.
/// forward uses e^{-2 pi i k.x}, backward e^{+2 pi i k.x}.
void transform_2d(std::span<std::complex<double>> data, int m, Direction dir);

}  // namespace mhdrelax::fft
