#include "gkdv/types.hpp"

#include <cmath>

namespace gkdv {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ProblemSpec::ProblemSpec(int n_, Eigen::VectorXd b_, double gamma_, double y0_)
    : n(n_), b(std::move(b_)), gamma(gamma_), y0(y0_) {
    // Short coefficient vectors are padded with zeros; trailing zeros beyond
    // index 2n-1 are dropped (appending zeros is a no-op).
    if (n >= 1) {
        const Eigen::Index want = 2 * n;
        if (b.size() < want) {
            Eigen::VectorXd padded = Eigen::VectorXd::Zero(want);
            padded.head(b.size()) = b;
            b = padded;
        } else if (b.size() > want) {
            for (Eigen::Index k = want; k < b.size(); ++k) {
                if (b[k] != 0.0)
                    throw StructuralError("ProblemSpec: nonzero coefficient beyond index 2n-1");
            }
            b = b.head(want).eval();
        }
    }
    validate();
}

void ProblemSpec::validate() const {
    if (n < 1) throw StructuralError("ProblemSpec: n must be >= 1");
    if (b.size() != 2 * n)
        throw StructuralError("ProblemSpec: b must have exactly 2n entries");
    if (!b.allFinite()) throw StructuralError("ProblemSpec: non-finite coefficient");
    if (!(y0 > 0.0) || !std::isfinite(y0))
        throw StructuralError("ProblemSpec: y0 must be positive");
    if (!std::isfinite(gamma)) throw StructuralError("ProblemSpec: gamma must be finite");
}

bool ProblemSpec::dissipativity_condition() const {
    for (int k = n - 1; k >= 0; --k) {
        const double coeff = b[2 * k];
        if (coeff != 0.0) {
            const double signed_coeff = ((n + k) % 2 == 0 ? coeff : -coeff);
            return signed_coeff > 0.0;
        }
    }
    return true;  // all even coefficients vanish
}

GridSpec::GridSpec(double L_, int N_, int M_) : L(L_), N(N_), M(M_) { validate(); }

void GridSpec::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) throw StructuralError("GridSpec: L must be positive");
    if (!is_power_of_two(N) || N < 16)
        throw StructuralError("GridSpec: N must be a power of two >= 16");
    if (M < 2) throw StructuralError("GridSpec: M must be >= 2");
}

Eigen::VectorXd GridSpec::xgrid() const {
    Eigen::VectorXd xs(N);
    for (int j = 0; j < N; ++j) xs[j] = x(j);
    return xs;
}

Eigen::VectorXd GridSpec::ygrid(double y0) const {
    Eigen::VectorXd ys(M);
    for (int i = 0; i < M; ++i) ys[i] = y0 * i / (M - 1);
    return ys;
}

Trajectory::Trajectory(std::vector<Field> f, Eigen::VectorXd y)
    : fields(std::move(f)), ygrid(std::move(y)) {
    validate();
}

void Trajectory::validate() const {
    if (static_cast<Eigen::Index>(fields.size()) != ygrid.size())
        throw StructuralError("Trajectory: fields/ygrid length mismatch");
    for (Eigen::Index i = 1; i < ygrid.size(); ++i) {
        if (!(ygrid[i] > ygrid[i - 1]))
            throw StructuralError("Trajectory: ygrid must be strictly increasing");
    }
    for (const auto& f : fields) {
        if (!f.allFinite()) throw StructuralError("Trajectory: non-finite field entry");
    }
}

std::string kernel_id_name(KernelId id) {
    switch (id) {
        case KernelId::U: return "U";
        case KernelId::ResolventIterate: return "R";
        case KernelId::G: return "G";
    }
    return "?";
}

KernelId kernel_id_from_name(const std::string& name) {
    if (name == "U") return KernelId::U;
    if (name == "R") return KernelId::ResolventIterate;
    if (name == "G") return KernelId::G;
    throw StructuralError("unknown kernel id: " + name);
}

void KernelTable::validate() const {
    if (values.rows() != yvalues.size() || values.cols() != xvalues.size())
        throw StructuralError("KernelTable: dims do not match declared grids");
    if (!values.allFinite()) throw StructuralError("KernelTable: non-finite entry");
}

}  // namespace gkdv
