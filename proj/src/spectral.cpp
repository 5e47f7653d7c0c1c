#include "gkdv/spectral.hpp"

#include <cmath>

namespace gkdv {

namespace {

// Simpson weights for int_0^{y_i}, with a trapezoid closure when the panel
// count is odd.  i >= 1.
std::vector<double> duhamel_weights(int i, double dy) {
    std::vector<double> w(i + 1, 0.0);
    if (i == 1) {
        w[0] = w[1] = 0.5 * dy;
        return w;
    }
    const int simpson_end = (i % 2 == 0) ? i : i - 1;
    for (int k = 0; k < simpson_end; k += 2) {
        w[k] += dy / 3.0;
        w[k + 1] += 4.0 * dy / 3.0;
        w[k + 2] += dy / 3.0;
    }
    if (i % 2 == 1) {
        w[i - 1] += 0.5 * dy;
        w[i] += 0.5 * dy;
    }
    return w;
}

}  // namespace

SymbolTable build_symbol(const ProblemSpec& spec, const GridSpec& grid) {
    spec.validate();
    grid.validate();
    const int deg = 2 * spec.n + 1;
    // Coefficients of z^deg + 0 z^{deg-1} + b_{2n-1} z^{2n-1} + ... + b_0.
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(deg + 1);
    coeff[deg] = 1.0;
    for (int k = 0; k < 2 * spec.n; ++k) coeff[k] = spec.b[k];
    const double sgn = (spec.n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1}

    SymbolTable sym{Eigen::VectorXcd(grid.N), spec, grid};
    for (int i = 0; i < grid.N; ++i) {
        const Complex z(0.0, -grid.lambda(i));
        Complex acc(0.0, 0.0);
        for (int d = deg; d >= 0; --d) acc = acc * z + coeff[d];
        sym.values[i] = sgn * acc;
        // The Nyquist slot has no conjugate partner; Im P is odd in lambda, so
        // the symmetric (realness-preserving) value there is its real part.
        if (grid.freq(i) == -grid.N / 2) sym.values[i] = Complex(sym.values[i].real(), 0.0);
    }
    return sym;
}

WellPosednessVerdict classify_wellposedness(const ProblemSpec& spec, const GridSpec& grid) {
    const SymbolTable sym = build_symbol(spec, grid);
    WellPosednessVerdict v;
    v.dissipativity_condition = spec.dissipativity_condition();
    double max_all = -std::numeric_limits<double>::infinity();
    double max_inner = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.N; ++i) {
        const double re = sym.values[i].real();
        max_all = std::max(max_all, re);
        if (std::abs(grid.freq(i)) <= grid.N / 4) max_inner = std::max(max_inner, re);
    }
    v.growth_bound = max_all;
    v.spectrum_bounded = max_all <= max_inner + 1e-9 * (1.0 + std::abs(max_all));
    return v;
}

SpectralField propagate(const SpectralField& s, const SymbolTable& sym, double dy) {
    if (dy < 0.0) throw DomainError("propagate: dy must be nonnegative");
    if (s.size() != sym.grid.N) throw StructuralError("propagate: length mismatch");
    Eigen::VectorXcd out(s.size());
    for (int i = 0; i < sym.grid.N; ++i) {
        const Complex p = sym.values[i];
        if (p.real() * dy > 700.0)
            throw GrowthError("propagate: exp overflow at wavenumber " +
                                  std::to_string(sym.grid.lambda(i)),
                              sym.grid.lambda(i));
        out[i] = s.coeffs[i] * std::exp(p * dy);
    }
    return SpectralField(std::move(out));
}

Trajectory solve_linear(const Field& u0, const Trajectory* f, const ProblemSpec& spec,
                        const GridSpec& grid, const LinearSolveOptions& opts) {
    const WellPosednessVerdict verdict = classify_wellposedness(spec, grid);
    if ((!verdict.dissipativity_condition || !verdict.spectrum_bounded) && !opts.acknowledge_growth)
        throw ConfigError(
            "solve_linear: well-posedness verdict requires acknowledge_growth to proceed");

    const SymbolTable sym = build_symbol(spec, grid);
    const int M = grid.M, N = grid.N;
    const double dy = grid.dy(spec.y0);

    const bool have_f = f != nullptr && f->levels() > 0;
    if (have_f) {
        if (f->levels() != M)
            throw StructuralError("solve_linear: source trajectory level count mismatch");
        if (M < 3)
            throw QuadratureOrderError("solve_linear: M < 3 cannot support Simpson quadrature");
    }

    const SpectralField u0_hat = to_spectral(u0, grid);
    std::vector<Eigen::VectorXcd> f_hat;
    if (have_f) {
        f_hat.reserve(M);
        for (int k = 0; k < M; ++k) f_hat.push_back(to_spectral(f->fields[k], grid).coeffs);
    }

    // exp(P m dy) for m = 0..M-1, reused by every level and history offset.
    std::vector<Eigen::VectorXcd> prop(M);
    for (int m = 0; m < M; ++m) {
        prop[m].resize(N);
        for (int i = 0; i < N; ++i) {
            const Complex p = sym.values[i];
            if (p.real() * (m * dy) > 700.0)
                throw GrowthError("solve_linear: exp overflow at wavenumber " +
                                      std::to_string(grid.lambda(i)),
                                  grid.lambda(i));
            prop[m][i] = std::exp(p * (m * dy));
        }
    }

    const double source_sign = (spec.n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    std::vector<Field> fields(M);
    fields[0] = u0;
    for (int i = 1; i < M; ++i) {
        Eigen::VectorXcd acc = prop[i].cwiseProduct(u0_hat.coeffs);
        if (have_f) {
            const std::vector<double> w = duhamel_weights(i, dy);
            for (int k = 0; k <= i; ++k)
                acc += (source_sign * w[k]) * prop[i - k].cwiseProduct(f_hat[k]);
        }
        fields[i] = from_spectral(SpectralField(std::move(acc)), grid);
    }
    return Trajectory(std::move(fields), grid.ygrid(spec.y0));
}

}  // namespace gkdv
