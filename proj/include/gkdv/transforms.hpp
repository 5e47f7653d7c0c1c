#pragma once

#include "gkdv/types.hpp"

namespace gkdv {

/// Forward transform; coefficient at slot i approximates
/// (1/2L) int f(x) exp(+i lambda_i x) dx on the periodic grid.
SpectralField to_spectral(const Field& f, const GridSpec& g);

/// Inverse transform, f(x_m) = sum_j c_j exp(-i lambda_j x_m).  The imaginary
/// residue must stay below 1e-12 relative to the field scale.
Field from_spectral(const SpectralField& s, const GridSpec& g);

/// k-th spectral derivative (multiplier (-i lambda)^k); the Nyquist mode is
/// zeroed for odd k.
SpectralField spectral_derivative(const SpectralField& s, const GridSpec& g, int k);

/// Convenience: k-th derivative of a real field.
Field derivative(const Field& f, const GridSpec& g, int k);

/// Zero all modes with |freq| > N/3 (two-thirds dealiasing rule).
SpectralField dealias(const SpectralField& s, const GridSpec& g);
Field dealias(const Field& f, const GridSpec& g);

/// Discrete L2 norm sqrt(dx * sum f^2) matching int f^2 dx.
double l2_norm(const Field& f, const GridSpec& g);

/// 2L * sum |c|^2; equals the squared l2_norm by Plancherel.
double spectral_energy(const SpectralField& s, const GridSpec& g);

}  // namespace gkdv
