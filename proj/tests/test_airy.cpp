#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gkdv/airy.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <cmath>
#include <random>

using namespace gkdv;

namespace {

// closed form int_0^inf cos(lambda^p) dlambda = Gamma(1 + 1/p) cos(pi / 2p)
double origin_value(int n) {
    const double p = 2.0 * n + 1.0;
    return std::tgamma(1.0 + 1.0 / p) * std::cos(M_PI / (2.0 * p));
}

// the n = 1 integral reduces to the classical Airy function by substitution
double classical_reduction(double x) {
    const double c = std::pow(3.0, -1.0 / 3.0);
    return M_PI * c * boost::math::airy_ai(-c * x);
}

}  // namespace

TEST_CASE("origin values against the closed-form oracle") {
    for (int n = 1; n <= 4; ++n)
        CHECK(std::abs(ain(n, 0.0) - origin_value(n)) < 1e-9);
}

TEST_CASE("first derivative at the origin against the closed-form oracle") {
    // int_0^inf lambda sin(lambda^3) dlambda = Gamma(2/3) sin(pi/3) / 3
    const double ref = std::tgamma(2.0 / 3.0) * std::sin(M_PI / 3.0) / 3.0;
    CHECK(std::abs(ain_deriv(1, 1, 0.0) - ref) < 1e-9);
}

TEST_CASE("n = 1 reduction to the classical Airy function") {
    const AinEvaluator ev(1);
    double worst = 0.0;
    for (double x = -10.0; x <= 10.0 + 1e-12; x += 0.25)
        worst = std::max(worst, std::abs(ev.eval(x, 0) - classical_reduction(x)));
    CHECK(worst < 1e-8);
}

TEST_CASE("derivative order zero reduces to the plain evaluation") {
    const AinEvaluator ev(2);
    CHECK(ev.eval(1.3, 0) == doctest::Approx(ain(2, 1.3)).epsilon(1e-13));
}

TEST_CASE("second derivative obeys the derived two-term relation at n = 1") {
    // z'' = -x z / 3 for the n = 1 kernel
    for (double x : {-3.0, 1.0, 2.5})
        CHECK(std::abs(ain_deriv(1, 2, x) + x * ain(1, x) / 3.0) < 1e-9);
}

TEST_CASE("ordinary differential equation residual stays small") {
    for (int n : {1, 2, 3}) {
        double worst = 0.0;
        for (double x = -5.0; x <= 5.0 + 1e-12; x += 0.5)
            worst = std::max(worst, std::abs(ode_residual(n, x)));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("smoothness: centered differences converge to the inserted-factor derivative") {
    const AinEvaluator ev(1);
    for (double x : {-2.0, 0.3, 4.0}) {
        const double d = ev.eval(x, 1);
        const double e1 = std::abs((ev.eval(x + 0.1, 0) - ev.eval(x - 0.1, 0)) / 0.2 - d);
        const double e2 = std::abs((ev.eval(x + 0.05, 0) - ev.eval(x - 0.05, 0)) / 0.1 - d);
        CHECK(e2 < e1 / 2.5);  // O(h^2)
    }
}

TEST_CASE("fundamental solution point value and domain error") {
    const double ref = origin_value(1) / M_PI;
    CHECK(std::abs(fundamental_solution(1, 0, 1.0, 0.0) - ref) < 1e-9);
    CHECK_THROWS_AS(fundamental_solution(1, 0, -0.5, 0.0), DomainError);
    CHECK_THROWS_AS(fundamental_solution(1, 0, 0.0, 0.0), DomainError);
}

TEST_CASE("fundamental solution self-similarity over random samples") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uy(0.1, 10.0), ux(-20.0, 20.0);
    const AinEvaluator ev(1);
    for (int t = 0; t < 25; ++t) {
        const double y = uy(rng), x = ux(rng);
        const double scale = std::pow(y, -1.0 / 3.0);
        const double lhs = fundamental_solution(ev, 0, y, x);
        const double rhs = scale * fundamental_solution(ev, 0, 1.0, x * scale);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("quadrature failure carries the partial result") {
    const AinEvaluator starved(1, 1e-12, 0.0, 2);
    try {
        starved.eval(6.0, 0);
        FAIL("expected a quadrature failure");
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.partial_sum));
        CHECK(e.error_estimate > 0.0);
    }
}

TEST_CASE("evaluator construction guards") {
    CHECK_THROWS_AS(AinEvaluator(0), DomainError);
    CHECK_THROWS_AS(AinEvaluator(1, 1e-13), StructuralError);
    CHECK_THROWS_AS(ain_deriv(1, 3, 0.0), DomainError);  // above 2n
}

TEST_CASE("left-tail stretch exponent fits for n = 1 and n = 2") {
    for (int n : {1, 2}) {
        const double lo = n == 1 ? 1.8 : 3.0, hi = n == 1 ? 18.0 : 30.0;
        const int count = 72;
        Eigen::VectorXd xs(count), ys(1);
        ys[0] = 1.0;
        for (int i = 0; i < count; ++i)
            xs[i] = -lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
        const auto tabs = fundamental_solution_tables(n, 0, ys, xs, 1e-10);
        const DecayFit fit = fit_decay_exponents(tabs[0], Side::Left);
        const double target = (2.0 * n + 1.0) / (2.0 * n);
        CHECK(std::abs(fit.exponent - target) <= 0.1 * target);
    }
}

TEST_CASE("right-side envelope exponent for n = 1") {
    const int count = 581;
    Eigen::VectorXd xs(count), ys(1);
    ys[0] = 1.0;
    for (int i = 0; i < count; ++i) xs[i] = 2.0 + 0.1 * i;
    const auto tabs = fundamental_solution_tables(1, 0, ys, xs, 1e-10);
    const DecayFit fit = fit_decay_exponents(tabs[0], Side::Right);
    CHECK(std::abs(fit.exponent - (-0.25)) <= 0.1);
}

TEST_CASE("decay fit needs enough usable samples") {
    Eigen::VectorXd xs(6), ys(1);
    ys[0] = 1.0;
    for (int i = 0; i < 6; ++i) xs[i] = -2.0 - i;
    const auto tabs = fundamental_solution_tables(1, 0, ys, xs, 1e-10);
    CHECK_THROWS_AS(fit_decay_exponents(tabs[0], Side::Left), InsufficientDataError);
}

TEST_CASE("table assembly is thread-count independent") {
    Eigen::VectorXd ys(3), xs(17);
    ys << 0.05, 0.4, 1.0;
    for (int i = 0; i < 17; ++i) xs[i] = -8.0 + i;
    const auto serial = fundamental_solution_tables(1, 1, ys, xs, 1e-10, 1);
    const auto threaded = fundamental_solution_tables(1, 1, ys, xs, 1e-10, 2);
    for (int j = 0; j <= 1; ++j)
        CHECK((serial[j].values - threaded[j].values).cwiseAbs().maxCoeff() == 0.0);
}
