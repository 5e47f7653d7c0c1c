#include "gkdv/transforms.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace gkdv {

namespace {

// With x_m = -L + m dx and lambda_j = pi j / L the exponent factorizes as
// exp(+i lambda_j x_m) = (-1)^j exp(2 pi i j m / N), so both directions reduce
// to a standard FFT plus an alternating sign.  For even N the parity of the
// signed mode j equals the parity of the storage slot.
void check_length(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want)
        throw StructuralError(std::string(what) + ": length mismatch");
}

}  // namespace

SpectralField to_spectral(const Field& f, const GridSpec& g) {
    check_length(f.size(), g.N, "to_spectral");
    if (!f.allFinite()) throw StructuralError("to_spectral: non-finite field");
    Eigen::VectorXcd time(g.N);
    for (int m = 0; m < g.N; ++m) time[m] = Complex(f[m], 0.0);
    Eigen::VectorXcd freq(g.N);
    Eigen::FFT<double> fft;
    fft.inv(freq, time);  // (1/N) sum f_m exp(+2 pi i j m / N)
    for (int i = 0; i < g.N; ++i)
        if (i & 1) freq[i] = -freq[i];
    return SpectralField(std::move(freq));
}

Field from_spectral(const SpectralField& s, const GridSpec& g) {
    check_length(s.size(), g.N, "from_spectral");
    Eigen::VectorXcd freq = s.coeffs;
    for (int i = 0; i < g.N; ++i)
        if (i & 1) freq[i] = -freq[i];
    Eigen::VectorXcd time(g.N);
    Eigen::FFT<double> fft;
    fft.fwd(time, freq);  // sum c_j exp(-2 pi i j m / N)
    double re_inf = 0.0, im_inf = 0.0;
    for (int m = 0; m < g.N; ++m) {
        re_inf = std::max(re_inf, std::abs(time[m].real()));
        im_inf = std::max(im_inf, std::abs(time[m].imag()));
    }
    if (im_inf > 1e-12 * std::max(1.0, re_inf))
        throw SymmetryError("from_spectral: input is not Hermitian-symmetric");
    Field out(g.N);
    for (int m = 0; m < g.N; ++m) out[m] = time[m].real();
    return out;
}

SpectralField spectral_derivative(const SpectralField& s, const GridSpec& g, int k) {
    check_length(s.size(), g.N, "spectral_derivative");
    if (k < 0) throw DomainError("spectral_derivative: negative order");
    Eigen::VectorXcd out = s.coeffs;
    const Complex minus_i(0.0, -1.0);
    for (int i = 0; i < g.N; ++i) {
        if ((k & 1) && g.freq(i) == -g.N / 2) {
            out[i] = 0.0;  // no symmetric partner for the Nyquist mode
            continue;
        }
        out[i] *= std::pow(minus_i * g.lambda(i), k);
    }
    return SpectralField(std::move(out));
}

Field derivative(const Field& f, const GridSpec& g, int k) {
    return from_spectral(spectral_derivative(to_spectral(f, g), g, k), g);
}

SpectralField dealias(const SpectralField& s, const GridSpec& g) {
    check_length(s.size(), g.N, "dealias");
    const int cutoff = g.N / 3;
    Eigen::VectorXcd out = s.coeffs;
    for (int i = 0; i < g.N; ++i)
        if (std::abs(g.freq(i)) > cutoff) out[i] = 0.0;
    return SpectralField(std::move(out));
}

Field dealias(const Field& f, const GridSpec& g) {
    return from_spectral(dealias(to_spectral(f, g), g), g);
}

double l2_norm(const Field& f, const GridSpec& g) {
    return std::sqrt(g.dx() * f.squaredNorm());
}

double spectral_energy(const SpectralField& s, const GridSpec& g) {
    return 2.0 * g.L * s.coeffs.squaredNorm();
}

}  // namespace gkdv
