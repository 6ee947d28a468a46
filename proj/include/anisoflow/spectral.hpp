#pragma once

#include <limits>

#include "anisoflow/field.hpp"

namespace anisoflow {

/// Normalized forward transform: c(k) = N^-1 sum_x f(x) exp(-i k.x).
SpectralField forward_transform(const RealField& physical);
/// Raw samples overload; throws std::invalid_argument on a size mismatch.
SpectralField forward_transform(const GridPtr& grid, std::span<const double> samples);
RealField inverse_transform(const SpectralField& field);

/// Multiplies each mode by i k_axis (axis in 1..3). Nyquist indices map to zero.
SpectralField derivative(const SpectralField& f, int axis);
SpectralField laplacian(const SpectralField& f);
SpectralField horizontal_laplacian(const SpectralField& f);
/// Multiplier 1/|k|^2 away from k = 0; the zero mode of the result is 0.
SpectralField inverse_neg_laplacian(const SpectralField& f);
/// Zeroes every mode outside the 2/3-rule band.
SpectralField dealias(SpectralField f);
void dealias_in_place(SpectralField& f);

/// Restores c(-k) = conj(c(k)) on the self-conjugate planes by averaging partners.
void enforce_hermitian(SpectralField& f);
/// max over modes of |c(k) - conj(c(-k))|.
double hermitian_defect(const SpectralField& f);

/// Standard H^s inner product, sum over |alpha| <= s of (d^alpha a | d^alpha b)_{L^2}.
double sobolev_inner(const SpectralField& a, const SpectralField& b, int s);
double sobolev_norm_sq(const SpectralField& a, int s);

/// Exponent value representing L^infinity in mixed_norm.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Discrete L^{q_h}(x1,x2) of L^{r_v}(x3) of the physical samples.
/// q_h, r_v must each be 2, 4 or kInfinity.
double mixed_norm(const SpectralField& f, double q_h, double r_v);
double mixed_norm(const RealField& f, double q_h, double r_v);

}  // namespace anisoflow
