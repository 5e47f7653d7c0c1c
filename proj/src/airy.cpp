#include "gkdv/airy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace gkdv {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr int kGL = 16;
constexpr double kGLNode[kGL / 2] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542,
};
constexpr double kGLWeight[kGL / 2] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806,
};

struct Phase {
    int n;
    double x;
    double value(double lam) const { return std::pow(lam, 2 * n + 1) - lam * x; }
    double slope(double lam) const { return (2 * n + 1) * std::pow(lam, 2 * n) - x; }
    double curvature(double lam) const {
        return (2 * n + 1) * (2 * n) * std::pow(lam, 2 * n - 1);
    }
};

// One Gauss-Legendre panel of int lam^j exp(i phi(lam)) dlam for all j at once.
void panel(const Phase& ph, double a, double b, int jmax, Complex* acc) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < kGL / 2; ++q) {
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            const double lam = mid + sgn * half * kGLNode[q];
            const double w = half * kGLWeight[q];
            const double phi = ph.value(lam);
            const Complex e(std::cos(phi), std::sin(phi));
            double amp = w;
            for (int j = 0; j <= jmax; ++j) {
                acc[j] += amp * e;
                amp *= lam;
            }
        }
    }
}

// Solve phi(lam) = target for lam >= lo where phi is increasing and convex.
double solve_phase(const Phase& ph, double target, double lo) {
    double lam = lo + (target - ph.value(lo)) / ph.slope(lo);
    for (int it = 0; it < 60; ++it) {
        const double f = ph.value(lam) - target;
        if (std::abs(f) <= 1e-9 * (1.0 + std::abs(target))) return lam;
        lam -= f / ph.slope(lam);
        if (lam < lo) lam = lo;
    }
    return lam;
}

// Cohen-Rodriguez Villegas-Zagier acceleration of sum_k (-1)^k c_k using the
// first nterms entries.
Complex sumalt(const std::vector<Complex>& c, int nterms) {
    const int m = std::min<int>(nterms, static_cast<int>(c.size()));
    if (m <= 0) return Complex(0.0, 0.0);
    double d = std::pow(3.0 + std::sqrt(8.0), m);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0, w = -d;
    Complex s(0.0, 0.0);
    for (int k = 0; k < m; ++k) {
        w = b - w;
        s += w * c[k];
        b *= (k + m) * (k - m) / ((k + 0.5) * (k + 1.0));
    }
    return s / d;
}

}  // namespace

AinEvaluator::AinEvaluator(int n, double quad_tol, double split_point, int max_tail_panels)
    : n_(n), quad_tol_(quad_tol), split_point_(split_point), max_tail_panels_(max_tail_panels) {
    if (n < 1) throw DomainError("AinEvaluator: n must be >= 1");
    if (quad_tol < 1e-12) throw StructuralError("AinEvaluator: quad_tol must be >= 1e-12");
    if (max_tail_panels < 2) throw StructuralError("AinEvaluator: max_tail_panels must be >= 2");
}

Eigen::VectorXd AinEvaluator::eval_all(double x, int jmax) const {
    if (jmax < 0 || jmax > 2 * n_)
        throw DomainError("AinEvaluator: derivative order must lie in 0..2n");
    const Phase ph{n_, x};

    double cut = split_point_ > 0.0 ? split_point_
                                    : std::max(4.0, std::pow(2.0 * std::abs(x), 1.0 / (2 * n_)));
    // The tail construction needs a strictly increasing phase beyond the cut.
    while (ph.slope(cut) <= 0.0) cut *= 1.5;

    // Resolved head: panels sized so the phase advances by at most ~3*pi each.
    std::vector<Complex> total(jmax + 1, Complex(0.0, 0.0));
    const double dphi_max = 3.0 * M_PI;
    double lam = 0.0;
    while (lam < cut) {
        const double sl = std::abs(ph.slope(lam));
        const double cv = ph.curvature(std::min(lam + 1.0, cut));
        double h = dphi_max / (sl + std::sqrt(0.5 * dphi_max * std::max(cv, 0.0)) + 1e-30);
        h = std::min(h, 2.0);
        if (lam + h > cut) h = cut - lam;
        panel(ph, lam, lam + h, jmax, total.data());
        lam += h;
    }

    // Oscillatory tail: panels between consecutive phase increments of pi,
    // factored into a strictly alternating series and accelerated.
    const double theta0 = ph.value(cut);
    std::vector<std::vector<Complex>> terms(jmax + 1);  // h_k per derivative order
    const Complex rot0(std::cos(theta0), -std::sin(theta0));
    double lo = cut;
    double sign = 1.0;
    std::vector<Complex> prev(jmax + 1, Complex(0.0, 0.0));
    bool have_prev = false;
    int k_done = 0;
    double err_est = 0.0;
    bool converged = false;

    std::vector<Complex> acc(jmax + 1);
    while (k_done < max_tail_panels_) {
        const int k_target =
            std::min(max_tail_panels_, k_done == 0 ? std::min(24, max_tail_panels_)
                                                   : k_done + std::max(8, k_done / 2));
        for (int k = k_done; k < k_target; ++k) {
            const double hi = solve_phase(ph, theta0 + (k + 1) * M_PI, lo);
            std::fill(acc.begin(), acc.end(), Complex(0.0, 0.0));
            panel(ph, lo, hi, jmax, acc.data());
            for (int j = 0; j <= jmax; ++j) terms[j].push_back(sign * rot0 * acc[j]);
            lo = hi;
            sign = -sign;
        }
        k_done = k_target;
        std::vector<Complex> cur(jmax + 1);
        for (int j = 0; j <= jmax; ++j) cur[j] = sumalt(terms[j], k_done);
        if (have_prev) {
            err_est = 0.0;
            for (int j = 0; j <= jmax; ++j) err_est = std::max(err_est, std::abs(cur[j] - prev[j]));
            if (err_est <= 0.25 * quad_tol_) {
                prev = cur;
                converged = true;
                break;
            }
        }
        prev = cur;
        have_prev = true;
        if (k_done >= max_tail_panels_) break;
    }
    const Complex rot_back(std::cos(theta0), std::sin(theta0));
    if (!converged) {
        for (int j = 0; j <= jmax; ++j)
            if (!terms[j].empty()) err_est = std::max(err_est, std::abs(terms[j].back()));
        if (err_est > quad_tol_)
            throw QuadratureError("ain: tail did not converge within the panel budget",
                                  (total[0] + rot_back * prev[0]).real(), err_est);
    }
    Eigen::VectorXd out(jmax + 1);
    Complex mi_pow(1.0, 0.0);  // (-i)^j
    const Complex minus_i(0.0, -1.0);
    for (int j = 0; j <= jmax; ++j) {
        const Complex a = total[j] + rot_back * prev[j];
        out[j] = (mi_pow * a).real();
        mi_pow *= minus_i;
    }
    return out;
}

double AinEvaluator::eval(double x, int j) const { return eval_all(x, j)[j]; }

double ain(int n, double x) { return AinEvaluator(n).eval(x, 0); }

double ain_deriv(int n, int j, double x) { return AinEvaluator(n).eval(x, j); }

double ode_residual(int n, double x) {
    const AinEvaluator ev(n);
    const Eigen::VectorXd z = ev.eval_all(x, 2 * n);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    return z[2 * n] - sgn * x * z[0] / (2.0 * n + 1.0);
}

double fundamental_solution(const AinEvaluator& ev, int j, double y, double x) {
    const int n = ev.order();
    if (!(y > 0.0)) throw DomainError("fundamental_solution: y must be positive");
    if (j < 0 || j > 2 * n - 1)
        throw DomainError("fundamental_solution: derivative order must lie in 0..2n-1");
    const double nu = 1.0 / (2.0 * n + 1.0);
    return std::pow(y, -(j + 1) * nu) / M_PI * ev.eval(x * std::pow(y, -nu), j);
}

double fundamental_solution(int n, int j, double y, double x) {
    return fundamental_solution(AinEvaluator(n), j, y, x);
}

std::vector<KernelTable> fundamental_solution_tables(int n, int jmax,
                                                     const Eigen::VectorXd& yvalues,
                                                     const Eigen::VectorXd& xvalues,
                                                     double quad_tol, int threads) {
    if (jmax < 0 || jmax > 2 * n)
        throw DomainError("fundamental_solution_tables: jmax must lie in 0..2n");
    for (Eigen::Index r = 0; r < yvalues.size(); ++r)
        if (!(yvalues[r] > 0.0))
            throw DomainError("fundamental_solution_tables: y-levels must be positive");

    const Eigen::Index rows = yvalues.size(), cols = xvalues.size();
    std::vector<KernelTable> tables(jmax + 1);
    for (int j = 0; j <= jmax; ++j) {
        tables[j].values.resize(rows, cols);
        tables[j].yvalues = yvalues;
        tables[j].xvalues = xvalues;
        tables[j].kernel = KernelId::U;
        tables[j].derivative_order = j;
    }

    const double nu = 1.0 / (2.0 * n + 1.0);
    auto fill_columns = [&](Eigen::Index c0, Eigen::Index c1) {
        const AinEvaluator ev(n, quad_tol);
        for (Eigen::Index c = c0; c < c1; ++c) {
            for (Eigen::Index r = 0; r < rows; ++r) {
                const double y = yvalues[r];
                const double scale0 = std::pow(y, -nu) / M_PI;
                const Eigen::VectorXd d = ev.eval_all(xvalues[c] * std::pow(y, -nu), jmax);
                double scale = scale0;
                for (int j = 0; j <= jmax; ++j) {
                    tables[j].values(r, c) = scale * d[j];
                    scale *= std::pow(y, -nu);
                }
            }
        }
    };

    int nth = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nth = std::max(1, std::min<int>(nth, static_cast<int>(cols)));
    if (nth == 1) {
        fill_columns(0, cols);
    } else {
        std::vector<std::thread> pool;
        const Eigen::Index chunk = (cols + nth - 1) / nth;
        for (int t = 0; t < nth; ++t) {
            const Eigen::Index c0 = t * chunk, c1 = std::min<Eigen::Index>(cols, c0 + chunk);
            if (c0 < c1) pool.emplace_back(fill_columns, c0, c1);
        }
        for (auto& th : pool) th.join();
    }
    return tables;
}

DecayFit fit_decay_exponents(const KernelTable& table, Side side, int row, double noise_floor) {
    if (row < 0 || row >= table.values.rows())
        throw StructuralError("fit_decay_exponents: row out of range");

    if (side == Side::Left) {
        // Collect (-x, |v|) on the decaying side, ordered by distance.
        std::vector<std::pair<double, double>> pts;
        for (Eigen::Index c = 0; c < table.xvalues.size(); ++c) {
            const double x = table.xvalues[c], v = std::abs(table.values(row, c));
            if (x < 0.0 && v > noise_floor && v < 0.5) pts.push_back({-x, v});
        }
        std::sort(pts.begin(), pts.end());
        if (pts.size() < 8)
            throw InsufficientDataError("fit_decay_exponents: fewer than 8 usable samples");
        // For n >= 2 the left tail oscillates inside its envelope, so the fit
        // runs through the local maxima; a monotone tail keeps every sample.
        std::vector<std::pair<double, double>> sel;
        for (size_t i = 1; i + 1 < pts.size(); ++i)
            if (pts[i].second >= pts[i - 1].second && pts[i].second >= pts[i + 1].second)
                sel.push_back(pts[i]);
        if (sel.size() < 5) sel = pts;
        // Model -log|v| = k + c (-x)^p: scan p, solve (k, c) linearly.
        const Eigen::Index m = static_cast<Eigen::Index>(sel.size());
        Eigen::VectorXd d(m), u(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            u[i] = sel[i].first;
            d[i] = -std::log(sel[i].second);
        }
        double best_p = 1.0, best_c = 0.0, best_rss = std::numeric_limits<double>::infinity();
        Eigen::MatrixXd A(m, 2);
        A.col(1).setOnes();
        for (double p = 0.5; p <= 3.0 + 1e-9; p += 0.002) {
            for (Eigen::Index i = 0; i < m; ++i) A(i, 0) = std::pow(u[i], p);
            const Eigen::Vector2d sol = (A.transpose() * A).ldlt().solve(A.transpose() * d);
            const double rss = (A * sol - d).squaredNorm();
            if (rss < best_rss) {
                best_rss = rss;
                best_p = p;
                best_c = sol[0];
            }
        }
        DecayFit fit;
        fit.exponent = best_p;
        fit.rate = best_c;
        fit.residual = std::sqrt(best_rss / m);
        fit.samples = static_cast<int>(pts.size());
        return fit;
    }

    // Right side: envelope through local maxima of |v|.
    std::vector<std::pair<double, double>> peaks;
    for (Eigen::Index c = 1; c + 1 < table.xvalues.size(); ++c) {
        if (table.xvalues[c] <= 0.0) continue;
        const double v = std::abs(table.values(row, c));
        if (v <= noise_floor) continue;
        if (v > std::abs(table.values(row, c - 1)) && v >= std::abs(table.values(row, c + 1)))
            peaks.push_back({std::log(table.xvalues[c]), std::log(v)});
    }
    if (peaks.size() < 8)
        throw InsufficientDataError("fit_decay_exponents: fewer than 8 usable peaks");
    const Eigen::Index m = static_cast<Eigen::Index>(peaks.size());
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        A(i, 0) = peaks[i].first;
        A(i, 1) = 1.0;
        rhs[i] = peaks[i].second;
    }
    const Eigen::Vector2d sol = (A.transpose() * A).ldlt().solve(A.transpose() * rhs);
    DecayFit fit;
    fit.exponent = sol[0];
    fit.rate = sol[1];
    fit.residual = std::sqrt((A * sol - rhs).squaredNorm() / m);
    fit.samples = static_cast<int>(peaks.size());
    return fit;
}

}  // namespace gkdv
