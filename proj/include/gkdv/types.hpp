#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

using Field = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Equation definition: (-1)^n u_y + u^(2n+1) + sum b_k u^(k) = gamma (u^2)_x + F
/// on the strip 0 < y < y0.
struct ProblemSpec {
    int n = 1;                  // equation order is 2n+1
    Eigen::VectorXd b;          // b_0 ... b_{2n-1}
    double gamma = 0.0;
    double y0 = 1.0;

    ProblemSpec() : b(Eigen::VectorXd::Zero(2)) {}
    ProblemSpec(int n_, Eigen::VectorXd b_, double gamma_, double y0_);

    /// True iff the leading nonzero coefficient among (-1)^{n+k} b_{2k}
    /// (scanned from k = n-1 down) is positive, or all even coefficients
    /// vanish.  Dissipativity of the principal even part.
    bool dissipativity_condition() const;

    void validate() const;
};

/// Uniform periodic grid on [-L, L) with N points and M y-levels.
struct GridSpec {
    double L = 16.0;
    int N = 256;
    int M = 65;

    GridSpec() = default;
    GridSpec(double L_, int N_, int M_);

    double dx() const { return 2.0 * L / N; }
    double dy(double y0) const { return y0 / (M - 1); }
    double x(int j) const { return -L + j * dx(); }
    Eigen::VectorXd xgrid() const;
    Eigen::VectorXd ygrid(double y0) const;

    /// Signed mode index for storage slot i (FFT layout): 0..N/2-1, -N/2..-1.
    int freq(int i) const { return i < N / 2 ? i : i - N; }
    /// Wavenumber lambda_j = pi j / L for storage slot i.
    double lambda(int i) const { return M_PI * freq(i) / L; }

    void validate() const;
};

/// Complex Fourier coefficients in FFT storage order.  Coefficient at
/// slot i belongs to wavenumber lambda_{freq(i)} and approximates
/// (1/2L) int f(x) exp(+i lambda x) dx, so that fields reconstruct as
/// f(x) = sum_j c_j exp(-i lambda_j x).
struct SpectralField {
    Eigen::VectorXcd coeffs;

    SpectralField() = default;
    explicit SpectralField(Eigen::VectorXcd c) : coeffs(std::move(c)) {}
    Eigen::Index size() const { return coeffs.size(); }
};

/// y-indexed sequence of fields on a common grid.
struct Trajectory {
    std::vector<Field> fields;
    Eigen::VectorXd ygrid;

    Trajectory() = default;
    Trajectory(std::vector<Field> f, Eigen::VectorXd y);

    int levels() const { return static_cast<int>(fields.size()); }
    void validate() const;
};

enum class KernelId { U, ResolventIterate, G };

std::string kernel_id_name(KernelId id);
KernelId kernel_id_from_name(const std::string& name);

/// Sampled space-time kernel on a (y, x) grid; rows index y-levels.
struct KernelTable {
    Eigen::MatrixXd values;     // rows: y-levels, cols: x-points
    Eigen::VectorXd yvalues;
    Eigen::VectorXd xvalues;
    KernelId kernel = KernelId::U;
    int derivative_order = 0;

    void validate() const;
};

}  // namespace gkdv
