#pragma once

#include "gkdv/types.hpp"

namespace gkdv {

/// Evaluator for the generalized Airy integral
///   Ain(x) = int_0^inf cos(lambda^{2n+1} - lambda x) dlambda
/// and its x-derivatives.  The integral converges only conditionally; the
/// tail beyond the split point is summed between consecutive phase
/// increments of pi and accelerated as an alternating series, which also
/// assigns the regularized value needed for derivative order 2n.
class AinEvaluator {
public:
    explicit AinEvaluator(int n, double quad_tol = 1e-10, double split_point = 0.0,
                          int max_tail_panels = 96);

    int order() const { return n_; }
    double quad_tol() const { return quad_tol_; }

    /// Derivatives 0..jmax in one pass (jmax <= 2n).
    Eigen::VectorXd eval_all(double x, int jmax) const;
    double eval(double x, int j = 0) const;

private:
    int n_;
    double quad_tol_;
    double split_point_;  // 0 => max(4, (2|x|)^{1/(2n)})
    int max_tail_panels_;
};

/// Ain(x) for the order-(2n+1) equation, absolute error <= quad tolerance.
double ain(int n, double x);

/// j-th x-derivative of Ain, 0 <= j <= 2n.  Each derivative inserts a factor
/// lambda and a quarter-period phase shift under the integral sign.
double ain_deriv(int n, int j, double x);

/// Residual of the derived ODE z^(2n)(x) = (-1)^n x z(x) / (2n+1).
double ode_residual(int n, double x);

/// d^j/dx^j U(y,x) = pi^{-1} y^{-(j+1)/(2n+1)} Ain^(j)(x y^{-1/(2n+1)}),
/// the self-similar fundamental solution of the model equation.
double fundamental_solution(int n, int j, double y, double x);
double fundamental_solution(const AinEvaluator& ev, int j, double y, double x);

/// All derivative tables 0..jmax of U sampled on (yvalues x xvalues).
/// Assembly parallelizes over x-columns; entries are independent, so the
/// result does not depend on the thread count.
std::vector<KernelTable> fundamental_solution_tables(int n, int jmax,
                                                     const Eigen::VectorXd& yvalues,
                                                     const Eigen::VectorXd& xvalues,
                                                     double quad_tol = 1e-10,
                                                     int threads = 0);

enum class Side { Left, Right };

struct DecayFit {
    double exponent = 0.0;  // left: stretch power p in exp(-c(-x)^p); right: envelope slope
    double rate = 0.0;      // left: the rate c; right: log-prefactor
    double residual = 0.0;  // RMS residual of the regression
    int samples = 0;
};

/// Fits the decay law of one table row.  Left side: stretched-exponential
/// model -log|v| = k + c (-x)^p with the exponent scanned and (k, c) solved
/// linearly; oscillatory tails (n >= 2) are fitted through their envelope
/// maxima.  Right side: algebraic envelope through the oscillation peaks,
/// log|peak| vs log x.  Samples below `noise_floor` are discarded (raise it
/// for tables assembled through floating-point convolutions).
DecayFit fit_decay_exponents(const KernelTable& table, Side side, int row = 0,
                             double noise_floor = 1e-14);

}  // namespace gkdv
