#pragma once

#include "gkdv/airy.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

struct ResolventConfig {
    int max_terms = 12;       // Neumann-series truncation
    double series_tol = 1e-10;  // stop when an iterate's max-norm falls below
    double quad_tol = 1e-9;   // Airy tolerance for kernel assembly
    int threads = 0;          // 0 => hardware concurrency

    void validate() const;
};

/// Green kernel G and d_x G sampled on difference offsets [-2L, 2L] for every
/// positive y-level, together with the underlying U derivative tables and the
/// recorded Neumann iterate norms.
struct GreenTable {
    KernelTable g;
    KernelTable gx;
    std::vector<KernelTable> u;  // d^k U for k = 0..2n
    std::vector<double> iterate_norms;
    bool converged = false;
    ProblemSpec spec;
    GridSpec grid;

    int levels() const { return static_cast<int>(g.yvalues.size()); }
};

/// The lower-order correction operator
///   (J v)(y, x) = (-1)^{n+1} int_0^y int sum_k b_k d_x^k U(y-eta, x-xi)
///                 v(eta, xi) dxi deta,
/// trapezoid in xi and eta.  Kernel rows younger than the grid can resolve
/// (stationary wavenumber above 3/4 of the Nyquist band) are skipped and the
/// trailing delta-neighborhood of the eta-integral is anchored on the last
/// resolved row; the convolved integrand stays finite there, so no singular
/// weight is required.
Trajectory apply_J(const Trajectory& v, const ProblemSpec& spec, const GridSpec& grid,
                   const std::vector<KernelTable>& utables);

/// Assembles G = U + sum_p J^p U (and d_x G from the d_x U seed); the two
/// series share quadrature so b = 0 reduces to a bitwise copy of U.
GreenTable build_green(const ProblemSpec& spec, const GridSpec& grid,
                       const ResolventConfig& cfg = {});

/// u(y) = G(y) * u0 + (-1)^n int_0^y G(y-eta) * f(eta) deta with the same
/// singular-panel treatment as apply_J.
Trajectory solve_linear_green(const Field& u0, const Trajectory* f, const GreenTable& gt);

struct GreenEstimateReport {
    DecayFit left_g;         // stretched-exponential fit of G, x < 0
    DecayFit left_gx;        // same for d_x G
    DecayFit right_envelope; // raw oscillation-peak envelope of G, x > 0
    double row_y = 0.0;      // y-level the fits were taken at
};

GreenEstimateReport verify_green_estimates(const GreenTable& gt);

/// gamma_{alpha,r}(y, xi, eta) = int (d_x G(y-eta, x-xi))^2 rho_{alpha,r}(x) dx.
double gamma_weighted_energy(const GreenTable& gt, double alpha, double r, double y,
                             double eta, double xi);

/// Node weights and delta-limit weight of the guarded Duhamel rule used by
/// the kernel solvers, exposed for representation checks built on the tables.
struct DuhamelQuadrature {
    std::vector<double> node_w;  // weights for eta-levels 0..i
    double limit_w = 0.0;        // weight of the analytic eta -> y_i limit
};
DuhamelQuadrature duhamel_quadrature(int level, const ProblemSpec& spec, const GridSpec& grid);

}  // namespace gkdv
