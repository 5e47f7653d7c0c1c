#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gkdv/transforms.hpp"
#include "gkdv/types.hpp"

#include <cmath>
#include <random>

using namespace gkdv;

namespace {

Field random_field(const GridSpec& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Field f(g.N);
    for (int j = 0; j < g.N; ++j) f[j] = gauss(rng);
    return f;
}

}  // namespace

TEST_CASE("problem spec validation and the dissipativity flag") {
    Eigen::VectorXd b(2);
    b << -1.0, 0.5;
    const ProblemSpec spec(1, b, 0.3, 2.0);
    CHECK(spec.dissipativity_condition());  // (-1)^{1+0} b0 = +1 > 0

    Eigen::VectorXd bpos(2);
    bpos << 1.0, 0.0;
    CHECK_FALSE(ProblemSpec(1, bpos, 0.0, 1.0).dissipativity_condition());

    // all even coefficients zero -> condition holds vacuously
    CHECK(ProblemSpec(1, Eigen::VectorXd::Zero(2), 0.0, 1.0).dissipativity_condition());

    // n = 2: leading even coefficient decides
    Eigen::VectorXd b4(4);
    b4 << -3.0, 0.0, -0.5, 0.0;  // (-1)^{2+1} b2 = +0.5 decides, b0 ignored
    CHECK(ProblemSpec(2, b4, 0.0, 1.0).dissipativity_condition());

    CHECK_THROWS_AS(ProblemSpec(0, b, 0.0, 1.0), StructuralError);
    CHECK_THROWS_AS(ProblemSpec(1, b, 0.0, -1.0), StructuralError);
}

TEST_CASE("appending zero coefficients beyond 2n-1 is a no-op") {
    Eigen::VectorXd b(2);
    b << -1.0, 0.5;
    Eigen::VectorXd extended(4);
    extended << -1.0, 0.5, 0.0, 0.0;
    const ProblemSpec a(1, b, 0.0, 1.0), c(1, extended, 0.0, 1.0);
    CHECK(a.b == c.b);
    CHECK(a.dissipativity_condition() == c.dissipativity_condition());

    Eigen::VectorXd bad(3);
    bad << -1.0, 0.5, 0.1;
    CHECK_THROWS_AS(ProblemSpec(1, bad, 0.0, 1.0), StructuralError);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec(10.0, 100, 8), StructuralError);  // not a power of two
    CHECK_THROWS_AS(GridSpec(10.0, 8, 8), StructuralError);    // below 16
    CHECK_THROWS_AS(GridSpec(10.0, 64, 1), StructuralError);
    const GridSpec g(10.0, 64, 5);
    CHECK(g.dx() == doctest::Approx(20.0 / 64));
    CHECK(g.dy(1.0) == doctest::Approx(0.25));
    CHECK(g.lambda(1) == doctest::Approx(M_PI / 10.0));
    CHECK(g.freq(63) == -1);
}

TEST_CASE("constant and single-mode transforms") {
    const GridSpec g(10.0, 64, 2);
    SUBCASE("constant field has only the zero mode") {
        const Field ones = Field::Ones(g.N);
        const SpectralField s = to_spectral(ones, g);
        CHECK(std::abs(s.coeffs[0] - Complex(1.0, 0.0)) < 1e-14);
        for (int i = 1; i < g.N; ++i) CHECK(std::abs(s.coeffs[i]) < 1e-14);
    }
    SUBCASE("cos(pi x / L) splits into the j = +-1 modes") {
        Field f(g.N);
        for (int j = 0; j < g.N; ++j) f[j] = std::cos(M_PI * g.x(j) / g.L);
        const SpectralField s = to_spectral(f, g);
        for (int i = 0; i < g.N; ++i) {
            const double expected = std::abs(g.freq(i)) == 1 ? 0.5 : 0.0;
            CHECK(std::abs(s.coeffs[i] - Complex(expected, 0.0)) < 1e-14);
        }
    }
    SUBCASE("single mode pair reconstructs the cosine") {
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(g.N);
        c[1] = Complex(0.5, 0.0);
        c[g.N - 1] = Complex(0.5, 0.0);
        const Field f = from_spectral(SpectralField(std::move(c)), g);
        for (int j = 0; j < g.N; ++j)
            CHECK(f[j] == doctest::Approx(std::cos(M_PI * g.x(j) / g.L)).epsilon(1e-13));
    }
}

TEST_CASE("Gaussian spectrum matches the analytic transform") {
    const GridSpec g(20.0, 256, 2);
    Field f(g.N);
    for (int j = 0; j < g.N; ++j) f[j] = std::exp(-g.x(j) * g.x(j));
    const SpectralField s = to_spectral(f, g);
    for (int i = 0; i < g.N; ++i) {
        const double lam = g.lambda(i);
        const double ref = std::sqrt(M_PI) / (2.0 * g.L) * std::exp(-lam * lam / 4.0);
        CHECK(std::abs(s.coeffs[i] - Complex(ref, 0.0)) < 1e-13);
    }
}

TEST_CASE("round trip and Plancherel for random fields") {
    const GridSpec g(13.0, 128, 2);
    for (unsigned seed : {7u, 8u, 9u}) {
        const Field f = random_field(g, seed);
        const SpectralField s = to_spectral(f, g);
        const Field back = from_spectral(s, g);
        CHECK((back - f).cwiseAbs().maxCoeff() < 1e-12);
        const double phys = g.dx() * f.squaredNorm();
        CHECK(spectral_energy(s, g) == doctest::Approx(phys).epsilon(1e-12));
        // Hermitian symmetry of the real transform
        for (int i = 1; i < g.N; ++i) {
            if (g.freq(i) == -g.N / 2) continue;
            int partner = (g.N - i) % g.N;
            CHECK(std::abs(s.coeffs[i] - std::conj(s.coeffs[partner])) < 1e-13);
        }
    }
}

TEST_CASE("zero coefficients produce the zero field") {
    const GridSpec g(10.0, 64, 2);
    const Field f = from_spectral(SpectralField(Eigen::VectorXcd::Zero(g.N)), g);
    CHECK(f.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-Hermitian input is rejected") {
    const GridSpec g(10.0, 64, 2);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(g.N);
    c[3] = Complex(1.0, 0.0);  // no conjugate partner
    CHECK_THROWS_AS(from_spectral(SpectralField(std::move(c)), g), SymmetryError);
}

TEST_CASE("length mismatches raise structural errors") {
    const GridSpec g(10.0, 64, 2);
    CHECK_THROWS_AS(to_spectral(Field::Zero(32), g), StructuralError);
    CHECK_THROWS_AS(from_spectral(SpectralField(Eigen::VectorXcd::Zero(32)), g),
                    StructuralError);
}

TEST_CASE("spectral derivative matches analytic derivatives") {
    const GridSpec g(14.0, 256, 2);
    Field f(g.N), df(g.N);
    for (int j = 0; j < g.N; ++j) {
        const double x = g.x(j);
        f[j] = std::exp(-x * x);
        df[j] = -2.0 * x * std::exp(-x * x);
    }
    const Field got = derivative(f, g, 1);
    CHECK((got - df).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dealias removes the top third of the spectrum") {
    const GridSpec g(10.0, 64, 2);
    const Field f = random_field(g, 42);
    const SpectralField s = dealias(to_spectral(f, g), g);
    for (int i = 0; i < g.N; ++i)
        if (std::abs(g.freq(i)) > g.N / 3) CHECK(std::abs(s.coeffs[i]) == 0.0);
}

TEST_CASE("trajectory validation") {
    const GridSpec g(10.0, 64, 3);
    std::vector<Field> fields(3, Field::Zero(g.N));
    Eigen::VectorXd bad(3);
    bad << 0.0, 0.2, 0.1;  // not increasing
    CHECK_THROWS_AS(Trajectory(fields, bad), StructuralError);
    Eigen::VectorXd good(3);
    good << 0.0, 0.1, 0.2;
    CHECK_NOTHROW(Trajectory(fields, good));
}
