#pragma once

#include "gkdv/types.hpp"

namespace gkdv {

struct WeightSpec {
    enum class Kind { Psi, Rho, RhoR };
    Kind kind = Kind::Psi;
    double alpha = 0.0;
    double r = 1.0;  // RhoR only
};

/// psi_0: smooth non-decreasing step, exactly 0 for x <= 1/2 and exactly 1
/// for x >= 1, strictly increasing between.
double psi0(double x);
/// psi_alpha = x^alpha psi_0(x).
double psi_weight(double alpha, double x);
/// rho_alpha: exp(-x) for x > 0, (1-x)^alpha for x <= 0.
double rho_weight(double alpha, double x);
/// rho_{alpha,r}: rho_alpha for x >= -r, clamped to (1+r)^alpha below.
double rho_r_weight(double alpha, double r, double x);

double weight_eval(const WeightSpec& w, double x);

/// N_alpha(v) = int |x|^alpha v^2 dx by trapezoid over the grid.
double N_alpha(const Field& v, double alpha, const GridSpec& grid);

/// Semi-norm sup_y [ int |d_x^k d_y^j u|^2 + int (1+x^2)^s |d_y^j u|^2 ].
/// For j = 1 supply the y-derivative trajectory computed from the equation.
double seminorm(const Trajectory& u, const Trajectory* u_y, int k, int s, int j,
                const GridSpec& grid);

/// M[u] = max_y [ ||u||^2 + N_{3+1/n}(u) ]; finiteness defines the
/// uniqueness class.
double M_functional(const Trajectory& u, int n, const GridSpec& grid);

struct MollifierSpec {
    double h = 0.1;  // kernel is the standard normalized C-infinity bump on [-1,1]
};

/// u_{0h} = psi_0(x + 1/h) psi_0(1/h - x) (lambda_h * u0); an L2 contraction.
Field mollify(const Field& u0, const MollifierSpec& m, const GridSpec& grid);

/// Smooth bump exp(-1/((t-a)(b-t))) on (a,b), zero elsewhere, with exact
/// derivatives of any order via truncated Taylor arithmetic.
class BumpFunction {
public:
    BumpFunction(double a, double b);
    double value(double t) const;
    /// Derivatives 0..kmax at t, exact to rounding.
    Eigen::VectorXd derivatives(double t, int kmax) const;
    double lower() const { return a_; }
    double upper() const { return b_; }

private:
    double a_, b_;
};

struct TestFunctionSpec {
    BumpFunction in_y;
    BumpFunction in_x;
};

/// Quadrature value of the weak-form identity
///   intint ( u L*phi + gamma u^2 phi_x ) dx dy,  phi = in_y(y) in_x(x),
/// with L* = -d_x^{2n+1} - (-1)^n d_y + sum_k (-1)^k b_k d_x^k.  Tends to 0
/// under refinement when u solves the equation weakly.
double weak_residual(const Trajectory& u, const TestFunctionSpec& phi, const ProblemSpec& spec,
                     const GridSpec& grid);

struct AttainmentRecord {
    double y = 0.0;
    double omega_gap = 0.0;  // | int (u(y) - u0) omega dx |
    double l2_gap = 0.0;     // || u(y) - u0 ||
};

/// Gap sequences for the first y-levels; both must trend to zero as y -> 0.
std::vector<AttainmentRecord> initial_attainment(const Trajectory& u, const Field& u0,
                                                 const BumpFunction& omega, const GridSpec& grid,
                                                 int levels = 6);

}  // namespace gkdv
