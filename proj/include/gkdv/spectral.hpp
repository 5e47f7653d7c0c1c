#pragma once

#include "gkdv/transforms.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

/// Fourier symbol P(-i lambda_j) of the spatial operator, FFT storage order.
struct SymbolTable {
    Eigen::VectorXcd values;
    ProblemSpec spec;
    GridSpec grid;
};

/// values[j] = (-1)^{n+1} [ (-i lambda_j)^{2n+1} + sum_k b_k (-i lambda_j)^k ],
/// evaluated by a Horner recurrence in z = -i lambda_j.
SymbolTable build_symbol(const ProblemSpec& spec, const GridSpec& grid);

struct WellPosednessVerdict {
    bool dissipativity_condition = false;
    bool spectrum_bounded = false;
    double growth_bound = 0.0;  // max over the grid of Re P(-i lambda)
};

/// Symbolic dissipativity condition plus a numerical growth bound.  The
/// spectrum counts as bounded when the outer wavenumber band does not push
/// Re P above the inner-band maximum.
WellPosednessVerdict classify_wellposedness(const ProblemSpec& spec, const GridSpec& grid);

/// coeff_j <- coeff_j * exp(values[j] dy); exact semigroup in dy.
SpectralField propagate(const SpectralField& s, const SymbolTable& sym, double dy);

struct LinearSolveOptions {
    /// Required when the verdict is not clean (condition false or spectrum
    /// unbounded); the solver then runs anyway and the caller owns the growth.
    bool acknowledge_growth = false;
};

/// Exact-in-y spectral solve of the linear problem (gamma = 0):
///   u~(y) = e^{Py} u0~ + int_0^y e^{P(y-eta)} (-1)^n f~(eta) deta,
/// with the Duhamel integral by composite Simpson on the y-grid (trapezoid on
/// a final odd panel).  The (-1)^n factor maps the physical source into the
/// normal form the symbol propagates.
Trajectory solve_linear(const Field& u0, const Trajectory* f, const ProblemSpec& spec,
                        const GridSpec& grid, const LinearSolveOptions& opts = {});

}  // namespace gkdv
