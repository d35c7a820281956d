#pragma once

#include "chiralpinem/grid.hpp"

namespace chiralpinem::fft {

/// Zero-pad a centered field by an integer factor (same pixel size, larger
/// extent); the center pixel stays at index (nx'/2, ny'/2).
ComplexField zero_pad(const ComplexField& f, int factor);

/// Centered continuous-convention Fourier transform,
///   F(k) = sum f(x) exp(-i k . x) * pixel_area,
/// returned on a centered k-grid with dk = 2 pi / (N dx) (momentum
/// convention k = 2 pi / distance). Exact DFT Parseval:
///   sum |F|^2 dk_area = (2 pi)^2 sum |f|^2 pixel_area.
ComplexField forward_centered(const ComplexField& f);

/// Circular convolution of a real map with an isotropic Gaussian of the given
/// width (same units as the map's axes). The kernel is normalized on-grid, so
/// the total is conserved to rounding. sigma <= 0 returns the input.
RealField gaussian_blur(const RealField& map, double sigma);

}  // namespace chiralpinem::fft
