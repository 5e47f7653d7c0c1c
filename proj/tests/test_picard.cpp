#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gkdv/harness.hpp"
#include "gkdv/picard.hpp"

#include <cmath>

using namespace gkdv;

namespace {

ProblemSpec make_spec(int n, std::initializer_list<double> bs, double gamma, double y0) {
    Eigen::VectorXd b(static_cast<Eigen::Index>(bs.size()));
    int i = 0;
    for (double v : bs) b[i++] = v;
    return ProblemSpec(n, b, gamma, y0);
}

double max_traj_diff(const Trajectory& a, const Trajectory& b) {
    double worst = 0.0;
    for (int i = 0; i < a.levels(); ++i)
        worst = std::max(worst, (a.fields[i] - b.fields[i]).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace

TEST_CASE("window estimate against the Gaussian closed form") {
    const GridSpec g(12.0, 128, 17);
    const ProblemSpec spec = make_spec(1, {-1.0, 0.0}, 1.0, 1.0);
    const Field u0 = harness::gaussian_field(g);
    PicardConfig cfg;

    const double E0 = 4.0 * std::sqrt(M_PI / 2.0);
    const double y1 = compute_y1(u0, nullptr, cfg, spec, g);
    CHECK(y1 == doctest::Approx(1.0 / (4.0 * cfg.C4 * E0)).epsilon(1e-6));

    // quadratic scaling: halving the data quadruples the window
    const double y1_half = compute_y1(0.5 * u0, nullptr, cfg, spec, g);
    CHECK(y1_half / y1 == doctest::Approx(4.0).epsilon(1e-8));

    // zero data: infinite window sentinel
    CHECK(std::isinf(compute_y1(Field::Zero(g.N), nullptr, cfg, spec, g)));

    // a source enters through C5 = (1/eps) sup_y int F^2 + F_xx^2
    std::vector<Field> lv(g.M, u0);
    const Trajectory F(lv, g.ygrid(spec.y0));
    const double y1_forced = compute_y1(u0, &F, cfg, spec, g);
    const double C5 = E0 / cfg.epsilon;
    CHECK(y1_forced ==
          doctest::Approx((E0 + C5) / (4.0 * cfg.C4 * E0 * E0 + 2.0 * C5 * C5 + C5))
              .epsilon(1e-8));
}

TEST_CASE("a vanishing gamma makes the sweep identical to the linear solve") {
    const GridSpec g(12.0, 128, 17);
    const ProblemSpec spec = make_spec(1, {-1.0, 0.3}, 0.0, 0.5);
    const Field u0 = harness::gaussian_field(g);
    const Trajectory F = harness::manufactured_linear_force(spec, g);
    std::vector<Field> seed(g.M, Field::Zero(g.N));
    const Trajectory prev(seed, g.ygrid(spec.y0));
    const Trajectory stepped = picard_step(prev, u0, &F, spec, g);
    const Trajectory direct = solve_linear(u0, &F, spec, g);
    CHECK(max_traj_diff(stepped, direct) == 0.0);
}

TEST_CASE("a zero previous iterate yields the homogeneous evolution") {
    const GridSpec g(12.0, 128, 17);
    const ProblemSpec spec = make_spec(1, {-1.0, 0.0}, 2.0, 0.5);
    const Field u0 = harness::gaussian_field(g);
    std::vector<Field> seed(g.M, Field::Zero(g.N));
    const Trajectory prev(seed, g.ygrid(spec.y0));
    const Trajectory stepped = picard_step(prev, u0, nullptr, spec, g);
    const Trajectory direct = solve_linear(u0, nullptr, spec, g);
    CHECK(max_traj_diff(stepped, direct) < 1e-15);
}

TEST_CASE("zero data converges immediately to zero") {
    const GridSpec g(12.0, 64, 17);
    const ProblemSpec spec = make_spec(1, {-1.0, 0.0}, 1.5, 0.5);
    const auto [traj, trace] = solve_nonlinear(Field(Field::Zero(g.N)), nullptr, spec, g, {});
    CHECK(trace.converged);
    CHECK(trace.records.size() <= 2);
    for (const auto& f : traj.fields) CHECK(f.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("converged solutions are fixed points of the sweep") {
    const GridSpec g(12.0, 128, 33);
    const ProblemSpec spec = make_spec(1, {-0.5, 0.0}, 1.0, 0.4);
    PicardConfig cfg;
    cfg.tol = 1e-11;
    cfg.max_iter = 50;
    cfg.window_policy = PicardConfig::WindowPolicy::Single;
    const Field u0 = harness::gaussian_field(g, 0.4);
    const auto [traj, trace] = solve_nonlinear(u0, nullptr, spec, g, cfg);
    REQUIRE(trace.converged);
    const Trajectory again = picard_step(traj, u0, nullptr, spec, g);
    CHECK(max_traj_diff(again, traj) < 10.0 * cfg.tol);
}

TEST_CASE("iterate differences decrease monotonically inside the window") {
    const GridSpec g(12.0, 128, 33);
    const ProblemSpec spec = make_spec(1, {-0.5, 0.0}, 1.0, 0.5);
    PicardConfig cfg;
    cfg.tol = 1e-11;
    cfg.max_iter = 50;
    cfg.window_policy = PicardConfig::WindowPolicy::Single;
    const Field u0 = harness::gaussian_field(g, 0.3);
    const auto [traj, trace] = solve_nonlinear(u0, nullptr, spec, g, cfg);
    REQUIRE(trace.converged);
    REQUIRE(trace.records.size() >= 3);
    for (size_t i = 2; i + 1 < trace.records.size(); ++i)
        CHECK(trace.records[i + 1].diff_l2 < trace.records[i].diff_l2);
}

TEST_CASE("odd symmetry in (gamma, data) is exact") {
    const GridSpec g(12.0, 128, 17);
    const ProblemSpec spec = make_spec(1, {-1.0, 0.3}, 0.8, 0.4);
    ProblemSpec neg = spec;
    neg.gamma = -spec.gamma;
    const Field u0 = harness::gaussian_field(g, 0.7);
    PicardConfig cfg;
    cfg.tol = 1e-10;
    const auto [up, t1] = solve_nonlinear(u0, nullptr, spec, g, cfg);
    const auto [un, t2] = solve_nonlinear(Field(-u0), nullptr, neg, g, cfg);
    for (int i = 0; i < up.levels(); ++i)
        CHECK((up.fields[i] + un.fields[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("manufactured nonlinear solution converges at order two or better") {
    const ProblemSpec spec = make_spec(1, {-1.0, 0.3}, 0.7, 0.4);
    auto error_at = [&](int M) {
        const GridSpec g(12.0, 128, M);
        PicardConfig cfg;
        cfg.tol = 1e-12;
        cfg.max_iter = 60;
        cfg.window_policy = PicardConfig::WindowPolicy::Single;
        const Trajectory F = harness::manufactured_nonlinear_force(spec, g);
        const Field u0 = harness::gaussian_field(g);
        const auto [traj, trace] = solve_nonlinear(u0, &F, spec, g, cfg);
        const Trajectory ref = harness::manufactured_solution(spec, g);
        return l2_norm(traj.fields[M - 1] - ref.fields[M - 1], g) /
               l2_norm(ref.fields[M - 1], g);
    };
    const double e17 = error_at(17), e33 = error_at(33);
    CHECK(std::log2(e17 / e33) >= 2.0);
}

TEST_CASE("auto policy chains windows and reaches the horizon") {
    const GridSpec g(12.0, 128, 65);
    const ProblemSpec spec = make_spec(1, {-0.5, 0.0}, 1.0, 0.5);
    PicardConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 50;
    cfg.window_policy = PicardConfig::WindowPolicy::Auto;
    const Field u0 = harness::gaussian_field(g);
    const auto [traj, trace] = solve_nonlinear(u0, nullptr, spec, g, cfg);
    CHECK(trace.converged);
    CHECK(trace.window_bounds.size() >= 3);
    CHECK(trace.window_bounds.back() == doctest::Approx(spec.y0));
    CHECK(traj.levels() == g.M);
    // window estimates were recomputed per window
    CHECK(trace.window_y1.size() == trace.window_bounds.size() - 1);
}

TEST_CASE("the a-priori guard halts runaway iterates") {
    const GridSpec g(12.0, 128, 17);
    const ProblemSpec spec = make_spec(1, {0.0, 0.0}, 5.0, 1.0);
    PicardConfig cfg;
    cfg.tol = 1e-12;
    cfg.max_iter = 60;
    cfg.window_policy = PicardConfig::WindowPolicy::Single;
    const Field u0 = harness::gaussian_field(g, 3.0);
    CHECK_THROWS_AS(solve_nonlinear(u0, nullptr, spec, g, cfg), BoundViolationError);
}

TEST_CASE("the dissipativity precondition is enforced") {
    const GridSpec g(12.0, 64, 17);
    const ProblemSpec bad = make_spec(1, {1.0, 0.0}, 1.0, 0.5);
    CHECK_THROWS_AS(solve_nonlinear(harness::gaussian_field(g), nullptr, bad, g, {}),
                    ConfigError);
}

TEST_CASE("energy diagnostics report the three functionals and the ceiling") {
    const GridSpec g(12.0, 128, 9);
    const ProblemSpec spec = make_spec(1, {-1.0, 0.0}, 0.0, 0.5);
    std::vector<Field> zf(g.M, Field::Zero(g.N));
    const Trajectory zero(zf, g.ygrid(spec.y0));
    const EnergyDiagnostics dz = energy_diagnostics(zero, spec, g);
    for (const auto& lvl : dz.levels) {
        CHECK(lvl.l2sq == 0.0);
        CHECK(lvl.mean_integral == 0.0);
        CHECK(lvl.d2_l2sq == 0.0);
    }
    const Field u0 = harness::gaussian_field(g);
    const Trajectory t = solve_linear(u0, nullptr, spec, g);
    const EnergyDiagnostics d = energy_diagnostics(t, spec, g);
    CHECK(d.ceiling == doctest::Approx(2.0 * 4.0 * std::sqrt(M_PI / 2.0)).epsilon(1e-6));
    CHECK(d.levels[0].l2sq == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-9));
}

TEST_CASE("y-derivative from the equation matches a fine finite difference") {
    // Differencing needs dy far below the dispersive time scale, which is why
    // the solver derives d_y u from the equation; a very fine grid still
    // provides an independent cross-check.
    const GridSpec g(12.0, 128, 513);
    const ProblemSpec spec = make_spec(1, {-1.0, 0.4}, 0.0, 0.4);
    const Field u0 = harness::gaussian_field(g);
    const Trajectory t = solve_linear(u0, nullptr, spec, g);
    const Trajectory ty = y_derivative_from_equation(t, nullptr, spec, g);
    const double dy = g.dy(spec.y0);
    const int mid = 256;
    const Field fd = (t.fields[mid + 1] - t.fields[mid - 1]) / (2.0 * dy);
    CHECK((fd - ty.fields[mid]).cwiseAbs().maxCoeff() <
          1e-3 * ty.fields[mid].cwiseAbs().maxCoeff());
}
