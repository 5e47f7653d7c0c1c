#pragma once

#include "gkdv/spectral.hpp"
#include "gkdv/types.hpp"

namespace gkdv {

struct PicardConfig {
    double epsilon = 0.5;  // the epsilon inside C5
    double C4 = 1.0;       // unnamed window constant, exposed as a knob
    double tol = 1e-8;     // successive-iterate L2(D) stopping tolerance
    int max_iter = 25;
    enum class WindowPolicy { Single, Auto };
    WindowPolicy window_policy = WindowPolicy::Auto;

    void validate() const;
};

struct IterationRecord {
    int window = 0;
    int m = 0;              // iterate index within the window
    double sup_norm2 = 0.0;     // sup_y ||u_m||^2
    double sup_d2_norm2 = 0.0;  // sup_y ||d^2_x u_m||^2
    double diff_l2 = 0.0;       // ||u_m - u_{m-1}||_{L2(D)}
    double seconds = 0.0;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    std::vector<double> window_bounds;  // window start positions plus y0
    std::vector<double> window_y1;      // advisory y1 recomputed per window
    bool converged = false;
};

/// Guaranteed-window estimate
///   y1 = (E0 + C5) / (4 C4 E0^2 + 2 C5^2 + C5),
/// E0 = int (u0'')^2 + u0^2 dx, C5 = (1/eps) sup_y int F^2 + F_xx^2 dx.
/// Returns +inf when both E0 and C5 vanish.
double compute_y1(const Field& u0, const Trajectory* F, const PicardConfig& cfg,
                  const ProblemSpec& spec, const GridSpec& grid);

/// One Picard sweep: L u_m = gamma d_x(u_{m-1}^2) + F with u_m(0) = u0.
/// The quadratic is dealiased by the two-thirds rule before and after the
/// product so the source spectrum is exactly representable.
Trajectory picard_step(const Trajectory& prev, const Field& u0, const Trajectory* F,
                       const ProblemSpec& spec, const GridSpec& grid);

/// Picard iteration on [0, y0], either in one window or chained over windows
/// of advisory length y1 recomputed from each window's initial slice.
std::pair<Trajectory, IterationTrace> solve_nonlinear(const Field& u0, const Trajectory* F,
                                                      const ProblemSpec& spec,
                                                      const GridSpec& grid,
                                                      const PicardConfig& cfg = {});

struct EnergyRecord {
    double y = 0.0;
    double l2sq = 0.0;           // ||u||^2
    double mean_integral = 0.0;  // int u dx
    double d2_l2sq = 0.0;        // ||d^2_x u||^2
};

struct EnergyDiagnostics {
    std::vector<EnergyRecord> levels;
    double ceiling = 0.0;  // 2 E0 + C5
};

EnergyDiagnostics energy_diagnostics(const Trajectory& traj, const ProblemSpec& spec,
                                     const GridSpec& grid, const Trajectory* F = nullptr,
                                     const PicardConfig& cfg = {});

/// d_y u recovered from the equation itself (never by differencing):
///   u_y~ = P u~ + (-1)^n [gamma (-i lambda) q~ + F~],  q = dealiased u^2.
Trajectory y_derivative_from_equation(const Trajectory& u, const Trajectory* F,
                                      const ProblemSpec& spec, const GridSpec& grid);

}  // namespace gkdv
