#include "gkdv/norms.hpp"

#include "gkdv/transforms.hpp"

#include <cmath>
#include <vector>

namespace gkdv {

namespace {

double sigma(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Truncated Taylor (jet) arithmetic: coefficients c_k = f^(k)/k!.
using Jet = std::vector<double>;

Jet jet_recip(const Jet& a) {
    Jet r(a.size(), 0.0);
    r[0] = 1.0 / a[0];
    for (size_t k = 1; k < a.size(); ++k) {
        double s = 0.0;
        for (size_t j = 1; j <= k; ++j) s += a[j] * r[k - j];
        r[k] = -s / a[0];
    }
    return r;
}

Jet jet_exp(const Jet& a) {
    Jet e(a.size(), 0.0);
    e[0] = std::exp(a[0]);
    for (size_t k = 1; k < a.size(); ++k) {
        double s = 0.0;
        for (size_t j = 1; j <= k; ++j) s += j * a[j] * e[k - j];
        e[k] = s / k;
    }
    return e;
}

double trapezoid_weight(int j, int count) { return (j == 0 || j == count - 1) ? 0.5 : 1.0; }

}  // namespace

double psi0(double x) {
    // sigma(x - 1/2) / (sigma(x - 1/2) + sigma(1 - x)): exactly 0 below 1/2,
    // exactly 1 above 1, C-infinity and strictly increasing between.
    const double up = sigma(x - 0.5);
    if (up == 0.0) return 0.0;
    const double down = sigma(1.0 - x);
    return up / (up + down);
}

double psi_weight(double alpha, double x) {
    const double p = psi0(x);
    return p == 0.0 ? 0.0 : std::pow(x, alpha) * p;
}

double rho_weight(double alpha, double x) {
    return x > 0.0 ? std::exp(-x) : std::pow(1.0 - x, alpha);
}

double rho_r_weight(double alpha, double r, double x) {
    return x >= -r ? rho_weight(alpha, x) : std::pow(1.0 + r, alpha);
}

double weight_eval(const WeightSpec& w, double x) {
    switch (w.kind) {
        case WeightSpec::Kind::Psi: return psi_weight(w.alpha, x);
        case WeightSpec::Kind::Rho: return rho_weight(w.alpha, x);
        case WeightSpec::Kind::RhoR: return rho_r_weight(w.alpha, w.r, x);
    }
    return 0.0;
}

double N_alpha(const Field& v, double alpha, const GridSpec& grid) {
    if (alpha < 0.0) throw DomainError("N_alpha: alpha must be nonnegative");
    if (v.size() != grid.N) throw StructuralError("N_alpha: length mismatch");
    double acc = 0.0;
    for (int j = 0; j < grid.N; ++j)
        acc += trapezoid_weight(j, grid.N) * std::pow(std::abs(grid.x(j)), alpha) * v[j] * v[j];
    return acc * grid.dx();
}

double seminorm(const Trajectory& u, const Trajectory* u_y, int k, int s, int j,
                const GridSpec& grid) {
    if (j != 0 && j != 1) throw DomainError("seminorm: j must be 0 or 1");
    if (k < 0 || s < 0) throw DomainError("seminorm: k and s must be nonnegative");
    if (j == 1 && (u_y == nullptr || u_y->levels() != u.levels()))
        throw ConfigError("seminorm: j = 1 needs a matching y-derivative trajectory");
    double sup = 0.0;
    for (int i = 0; i < u.levels(); ++i) {
        const Field& base = (j == 0) ? u.fields[i] : u_y->fields[i];
        const Field dk = k > 0 ? derivative(base, grid, k) : base;
        double weighted = 0.0;
        for (int m = 0; m < grid.N; ++m) {
            const double x = grid.x(m);
            weighted += std::pow(1.0 + x * x, s) * base[m] * base[m];
        }
        sup = std::max(sup, grid.dx() * (dk.squaredNorm() + weighted));
    }
    return sup;
}

double M_functional(const Trajectory& u, int n, const GridSpec& grid) {
    const double alpha = 3.0 + 1.0 / n;
    double sup = 0.0;
    for (int i = 0; i < u.levels(); ++i) {
        const double v = grid.dx() * u.fields[i].squaredNorm() +
                         N_alpha(u.fields[i], alpha, grid);
        sup = std::max(sup, v);
    }
    return sup;
}

Field mollify(const Field& u0, const MollifierSpec& m, const GridSpec& grid) {
    if (!(m.h > 0.0 && m.h < 1.0)) throw DomainError("mollify: h must lie in (0,1)");
    if (1.0 / m.h >= grid.L)
        throw DomainError("mollify: 1/h must be smaller than L so the cutoff acts inside");
    if (u0.size() != grid.N) throw StructuralError("mollify: length mismatch");

    // Discrete kernel weights, renormalized to unit mass so the convolution
    // stays an L2 contraction even when h is only a few cells wide.
    const double dx = grid.dx();
    const int half = static_cast<int>(std::ceil(m.h / dx));
    std::vector<double> w(2 * half + 1, 0.0);
    double mass = 0.0;
    for (int q = -half; q <= half; ++q) {
        const double t = q * dx / m.h;
        const double v = std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
        w[q + half] = v;
        mass += v;
    }
    if (mass <= 0.0) throw DomainError("mollify: kernel unresolved on this grid");
    for (auto& v : w) v /= mass;

    Field out = Field::Zero(grid.N);
    for (int j = 0; j < grid.N; ++j) {
        double acc = 0.0;
        for (int q = -half; q <= half; ++q) {
            const int idx = j - q;
            if (idx >= 0 && idx < grid.N) acc += w[q + half] * u0[idx];
        }
        const double x = grid.x(j);
        out[j] = acc * psi0(x + 1.0 / m.h) * psi0(1.0 / m.h - x);
    }
    return out;
}

BumpFunction::BumpFunction(double a, double b) : a_(a), b_(b) {
    if (!(a < b)) throw StructuralError("BumpFunction: need a < b");
}

// The exponent is scaled by the squared half-width so the profile is the
// same for every support interval (value exp(-1) at the midpoint); an
// unscaled exponent degenerates to a near-top-hat with unresolvable edges
// on wide intervals.
double BumpFunction::value(double t) const {
    if (t <= a_ || t >= b_) return 0.0;
    const double scale = 0.25 * (b_ - a_) * (b_ - a_);
    const double q = (t - a_) * (b_ - t);
    const double e = -scale / q;
    return e < -700.0 ? 0.0 : std::exp(e);
}

Eigen::VectorXd BumpFunction::derivatives(double t, int kmax) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(kmax + 1);
    if (t <= a_ || t >= b_) return out;
    const double scale = 0.25 * (b_ - a_) * (b_ - a_);
    const double q0 = (t - a_) * (b_ - t);
    if (-scale / q0 < -700.0) return out;  // underflow region near the edges
    const int len = kmax + 1;
    Jet q(len, 0.0);
    q[0] = q0;
    if (len > 1) q[1] = (b_ - t) - (t - a_);
    if (len > 2) q[2] = -1.0;
    Jet w = jet_recip(q);
    for (auto& c : w) c = -scale * c;
    const Jet f = jet_exp(w);
    double factorial = 1.0;
    for (int k = 0; k <= kmax; ++k) {
        out[k] = f[k] * factorial;
        factorial *= (k + 1);
    }
    return out;
}

double weak_residual(const Trajectory& u, const TestFunctionSpec& phi, const ProblemSpec& spec,
                     const GridSpec& grid) {
    const double y0 = spec.y0;
    if (phi.in_y.lower() <= 0.0 || phi.in_y.upper() >= y0 || phi.in_x.lower() <= -grid.L ||
        phi.in_x.upper() >= grid.L)
        throw TestFunctionError("weak_residual: test function support touches the boundary");
    if (u.levels() != grid.M) throw StructuralError("weak_residual: trajectory/grid mismatch");

    const int n = spec.n;
    const int top = 2 * n + 1;
    const double sgn_y = (n % 2 == 0) ? -1.0 : 1.0;  // -(-1)^n

    // x-profiles reused across levels.
    Eigen::MatrixXd dx_profiles(grid.N, top + 1);
    for (int m = 0; m < grid.N; ++m)
        dx_profiles.row(m) = phi.in_x.derivatives(grid.x(m), top).transpose();

    const double dy = grid.dy(spec.y0);
    double acc = 0.0;
    for (int i = 0; i < grid.M; ++i) {
        const double y = u.ygrid[i];
        const Eigen::VectorXd py = phi.in_y.derivatives(y, 1);
        if (py[0] == 0.0 && py[1] == 0.0) continue;
        const Field& ui = u.fields[i];
        double slice = 0.0;
        for (int m = 0; m < grid.N; ++m) {
            // L* phi = -phi_x^{(2n+1)} py - (-1)^n phi_x py' + sum (-1)^k b_k phi_x^{(k)} py
            double lstar = -dx_profiles(m, top) * py[0] + sgn_y * dx_profiles(m, 0) * py[1];
            for (int k = 0; k < 2 * n; ++k) {
                const double s = (k % 2 == 0) ? 1.0 : -1.0;
                lstar += s * spec.b[k] * dx_profiles(m, k) * py[0];
            }
            slice += ui[m] * lstar + spec.gamma * ui[m] * ui[m] * dx_profiles(m, 1) * py[0];
        }
        acc += trapezoid_weight(i, grid.M) * dy * slice * grid.dx();
    }
    return acc;
}

std::vector<AttainmentRecord> initial_attainment(const Trajectory& u, const Field& u0,
                                                 const BumpFunction& omega, const GridSpec& grid,
                                                 int levels) {
    Eigen::VectorXd w(grid.N);
    for (int m = 0; m < grid.N; ++m) w[m] = omega.value(grid.x(m));
    const double base = grid.dx() * u0.dot(w);
    std::vector<AttainmentRecord> out;
    const int count = std::min<int>(levels, u.levels() - 1);
    for (int i = 1; i <= count; ++i) {
        AttainmentRecord rec;
        rec.y = u.ygrid[i];
        rec.omega_gap = std::abs(grid.dx() * u.fields[i].dot(w) - base);
        rec.l2_gap = l2_norm(u.fields[i] - u0, grid);
        out.push_back(rec);
    }
    return out;
}

}  // namespace gkdv
