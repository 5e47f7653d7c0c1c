#include "gkdv/picard.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace gkdv {

namespace {

double integral_sq_with_second_derivative(const Field& f, const GridSpec& grid) {
    const Field f2 = derivative(f, grid, 2);
    return grid.dx() * (f.squaredNorm() + f2.squaredNorm());
}

Field quadratic_source(const Field& u, double gamma, const GridSpec& grid) {
    const Field w = dealias(u, grid);
    const Field q = w.cwiseProduct(w);
    SpectralField qs = dealias(to_spectral(q, grid), grid);
    qs = spectral_derivative(qs, grid, 1);
    qs.coeffs *= gamma;
    return from_spectral(qs, grid);
}

double trajectory_l2d_diff(const Trajectory& a, const Trajectory& b, const GridSpec& grid,
                           double dy) {
    double acc = 0.0;
    const int M = a.levels();
    for (int i = 0; i < M; ++i) {
        const double wy = (i == 0 || i == M - 1) ? 0.5 * dy : dy;
        acc += wy * (a.fields[i] - b.fields[i]).squaredNorm() * grid.dx();
    }
    return std::sqrt(acc);
}

struct WindowResult {
    Trajectory traj;
    bool converged = false;
};

}  // namespace

void PicardConfig::validate() const {
    if (!(tol > 0.0)) throw StructuralError("PicardConfig: tol must be positive");
    if (max_iter < 2) throw StructuralError("PicardConfig: max_iter must be >= 2");
    if (!(epsilon > 0.0)) throw StructuralError("PicardConfig: epsilon must be positive");
    if (!(C4 > 0.0)) throw StructuralError("PicardConfig: C4 must be positive");
}

double compute_y1(const Field& u0, const Trajectory* F, const PicardConfig& cfg,
                  const ProblemSpec& spec, const GridSpec& grid) {
    (void)spec;
    cfg.validate();
    const double E0 = integral_sq_with_second_derivative(u0, grid);
    double C5 = 0.0;
    if (F != nullptr && F->levels() > 0) {
        double sup = 0.0;
        for (const auto& level : F->fields)
            sup = std::max(sup, integral_sq_with_second_derivative(level, grid));
        C5 = sup / cfg.epsilon;
    }
    if (E0 == 0.0 && C5 == 0.0) return std::numeric_limits<double>::infinity();
    return (E0 + C5) / (4.0 * cfg.C4 * E0 * E0 + 2.0 * C5 * C5 + C5);
}

Trajectory picard_step(const Trajectory& prev, const Field& u0, const Trajectory* F,
                       const ProblemSpec& spec, const GridSpec& grid) {
    if (prev.levels() != grid.M)
        throw StructuralError("picard_step: prev must cover the full y-grid");
    std::vector<Field> source(grid.M);
    for (int i = 0; i < grid.M; ++i) {
        source[i] = spec.gamma != 0.0 ? quadratic_source(prev.fields[i], spec.gamma, grid)
                                      : Field(Field::Zero(grid.N));
        if (F != nullptr && F->levels() > 0) source[i] += F->fields[i];
        if (!source[i].allFinite())
            throw DivergenceError("picard_step: non-finite source", {});
    }
    const Trajectory src(std::move(source), grid.ygrid(spec.y0));
    return solve_linear(u0, &src, spec, grid);
}

namespace {

WindowResult iterate_window(const Field& u0, const Trajectory* F, const ProblemSpec& spec,
                            const GridSpec& grid, const PicardConfig& cfg, int window_index,
                            double window_offset, double guard_ceiling, IterationTrace& trace) {
    const double dy = grid.dy(spec.y0);
    // u_1 is the constant-in-y extension of the initial slice.
    std::vector<Field> first(grid.M, u0);
    Trajectory current(std::move(first), grid.ygrid(spec.y0));
    std::vector<double> diffs;

    for (int m = 2; m <= cfg.max_iter + 1; ++m) {
        const auto t0 = std::chrono::steady_clock::now();
        Trajectory next = picard_step(current, u0, F, spec, grid);
        const double diff = trajectory_l2d_diff(next, current, grid, dy);
        const auto t1 = std::chrono::steady_clock::now();

        IterationRecord rec;
        rec.window = window_index;
        rec.m = m;
        rec.diff_l2 = diff;
        for (const auto& fld : next.fields) {
            rec.sup_norm2 = std::max(rec.sup_norm2, grid.dx() * fld.squaredNorm());
            const Field d2 = derivative(fld, grid, 2);
            rec.sup_d2_norm2 = std::max(rec.sup_d2_norm2, grid.dx() * d2.squaredNorm());
        }
        rec.seconds = std::chrono::duration<double>(t1 - t0).count();
        trace.records.push_back(rec);
        diffs.push_back(diff);

        if (rec.sup_norm2 + rec.sup_d2_norm2 > 1e6 * guard_ceiling)
            throw BoundViolationError("solve_nonlinear: iterate escaped the a-priori ceiling at y offset " +
                                      std::to_string(window_offset));

        current = std::move(next);
        if (diff < cfg.tol) return {std::move(current), true};
    }
    return {std::move(current), false};
}

}  // namespace

std::pair<Trajectory, IterationTrace> solve_nonlinear(const Field& u0, const Trajectory* F,
                                                      const ProblemSpec& spec,
                                                      const GridSpec& grid,
                                                      const PicardConfig& cfg) {
    cfg.validate();
    if (!spec.dissipativity_condition())
        throw ConfigError("solve_nonlinear: dissipativity condition fails for this spec");
    if (F != nullptr && F->levels() > 0 && F->levels() != grid.M)
        throw StructuralError("solve_nonlinear: source trajectory level count mismatch");

    const double dy = grid.dy(spec.y0);
    IterationTrace trace;

    const double E0_global = integral_sq_with_second_derivative(u0, grid);
    double C5 = 0.0;
    if (F != nullptr && F->levels() > 0) {
        double sup = 0.0;
        for (const auto& level : F->fields)
            sup = std::max(sup, integral_sq_with_second_derivative(level, grid));
        C5 = sup / cfg.epsilon;
    }
    const double guard = std::max(2.0 * E0_global + C5, 1e-12);

    if (cfg.window_policy == PicardConfig::WindowPolicy::Single) {
        trace.window_bounds = {0.0, spec.y0};
        trace.window_y1 = {compute_y1(u0, F, cfg, spec, grid)};
        WindowResult res = iterate_window(u0, F, spec, grid, cfg, 0, 0.0, guard, trace);
        trace.converged = res.converged;
        if (!res.converged) {
            std::vector<double> hist;
            for (const auto& r : trace.records) hist.push_back(r.diff_l2);
            throw ConvergenceError("solve_nonlinear: no convergence within max_iter", hist);
        }
        return {std::move(res.traj), std::move(trace)};
    }

    // Auto policy: chain windows of advisory length y1, snapped to the grid.
    // Windows span at least two panels so the Duhamel rule stays Simpson.
    std::vector<Field> glued;
    glued.reserve(grid.M);
    Field head = u0;
    int start = 0;
    int window_index = 0;
    trace.window_bounds.push_back(0.0);
    while (start < grid.M - 1) {
        const int remaining = grid.M - 1 - start;
        GridSpec probe = grid;  // y1 from the window's initial slice
        probe.M = remaining + 1;
        ProblemSpec pspec = spec;
        pspec.y0 = remaining * dy;
        Trajectory Fslice;
        const Trajectory* Fw = nullptr;
        if (F != nullptr && F->levels() > 0) {
            std::vector<Field> fl(F->fields.begin() + start, F->fields.end());
            Fslice = Trajectory(std::move(fl), probe.ygrid(pspec.y0));
            Fw = &Fslice;
        }
        const double y1 = compute_y1(head, Fw, cfg, pspec, probe);
        trace.window_y1.push_back(y1);

        int panels = remaining;
        if (std::isfinite(y1)) {
            panels = std::max(2, static_cast<int>(y1 / dy));
            panels += panels % 2;  // even counts keep the Duhamel rule pure Simpson
            panels = std::min<int>(remaining, panels);
        }
        if (remaining - panels == 1) panels = remaining;  // avoid a trailing 1-panel window

        GridSpec wgrid = grid;
        wgrid.M = panels + 1;
        ProblemSpec wspec = spec;
        wspec.y0 = panels * dy;
        Trajectory Fwin;
        const Trajectory* Fw2 = nullptr;
        if (F != nullptr && F->levels() > 0) {
            std::vector<Field> fl(F->fields.begin() + start, F->fields.begin() + start + panels + 1);
            Fwin = Trajectory(std::move(fl), wgrid.ygrid(wspec.y0));
            Fw2 = &Fwin;
        }

        WindowResult res =
            iterate_window(head, Fw2, wspec, wgrid, cfg, window_index, start * dy, guard, trace);
        if (!res.converged) {
            std::vector<double> hist;
            for (const auto& r : trace.records) hist.push_back(r.diff_l2);
            throw ConvergenceError("solve_nonlinear: window starting at y = " +
                                       std::to_string(start * dy) + " did not converge",
                                   hist);
        }
        for (int i = 0; i < panels; ++i) glued.push_back(res.traj.fields[i]);
        head = res.traj.fields[panels];
        start += panels;
        ++window_index;
        trace.window_bounds.push_back(start * dy);
    }
    glued.push_back(head);
    trace.converged = true;
    return {Trajectory(std::move(glued), grid.ygrid(spec.y0)), std::move(trace)};
}

EnergyDiagnostics energy_diagnostics(const Trajectory& traj, const ProblemSpec& spec,
                                     const GridSpec& grid, const Trajectory* F,
                                     const PicardConfig& cfg) {
    EnergyDiagnostics diag;
    diag.levels.reserve(traj.levels());
    for (int i = 0; i < traj.levels(); ++i) {
        EnergyRecord rec;
        rec.y = traj.ygrid[i];
        rec.l2sq = grid.dx() * traj.fields[i].squaredNorm();
        rec.mean_integral = grid.dx() * traj.fields[i].sum();
        const Field d2 = derivative(traj.fields[i], grid, 2);
        rec.d2_l2sq = grid.dx() * d2.squaredNorm();
        diag.levels.push_back(rec);
    }
    (void)spec;
    double E0 = 0.0;
    if (traj.levels() > 0) E0 = integral_sq_with_second_derivative(traj.fields[0], grid);
    double C5 = 0.0;
    if (F != nullptr && F->levels() > 0) {
        double sup = 0.0;
        for (const auto& level : F->fields)
            sup = std::max(sup, integral_sq_with_second_derivative(level, grid));
        C5 = sup / cfg.epsilon;
    }
    diag.ceiling = 2.0 * E0 + C5;
    return diag;
}

Trajectory y_derivative_from_equation(const Trajectory& u, const Trajectory* F,
                                      const ProblemSpec& spec, const GridSpec& grid) {
    const SymbolTable sym = build_symbol(spec, grid);
    const double sgn = (spec.n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    std::vector<Field> out(u.levels());
    for (int i = 0; i < u.levels(); ++i) {
        SpectralField uh = to_spectral(u.fields[i], grid);
        Eigen::VectorXcd acc = sym.values.cwiseProduct(uh.coeffs);
        if (spec.gamma != 0.0) {
            const Field src = quadratic_source(u.fields[i], spec.gamma, grid);
            acc += sgn * to_spectral(src, grid).coeffs;
        }
        if (F != nullptr && F->levels() > 0) acc += sgn * to_spectral(F->fields[i], grid).coeffs;
        out[i] = from_spectral(SpectralField(std::move(acc)), grid);
    }
    return Trajectory(std::move(out), u.ygrid);
}

}  // namespace gkdv
