#pragma once

#include "gkdv/green.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/picard.hpp"

#include <string>
#include <vector>

namespace gkdv {
namespace harness {

struct CheckRecord {
    std::string name;     // stable check id
    std::string anchor;   // coverage item it certifies, or "plumbing"
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckRecord> checks;
    double wall_seconds = 0.0;
    bool all_pass() const;
};

struct VerificationReport {
    std::vector<SuiteResult> suites;
    std::string config_json;
    unsigned long seed = 0;
    bool all_pass() const;
    /// Deterministic JSON given (config, seed); timings can be excluded so
    /// repeated runs compare byte-identical.
    std::string to_json(bool include_timings = true) const;
};

/// Claims the default report must visit; the coverage self-test fails the
/// run if any id lacks a check record.
const std::vector<std::pair<std::string, std::string>>& coverage_universe();

struct SuiteConfig {
    unsigned long seed = 12345;
    int threads = 0;
};

SuiteResult run_airy_suite(const SuiteConfig& cfg);
SuiteResult run_linear_suite(const SuiteConfig& cfg);
SuiteResult run_green_suite(const SuiteConfig& cfg);
SuiteResult run_picard_suite(const SuiteConfig& cfg);
SuiteResult run_weakform_suite(const SuiteConfig& cfg);
SuiteResult run_dependence_suite_default(const SuiteConfig& cfg);
SuiteResult run_blowup_suite_default(const SuiteConfig& cfg);

/// Perturbation experiment behind the continuous-dependence checks: solves
/// both data, reports per-level ratios
///   int rho_alpha (u-v)^2 dx / ( ||u0-v0||^2 + N_alpha(u0-v0) ).
struct DependenceSection {
    std::vector<double> ratios;  // per y-level
    double sup_ratio = 0.0;
    double denom = 0.0;
    bool exact_zero = false;  // v0 == u0
};
DependenceSection run_dependence_suite(const Field& u0, const Field& v0,
                                       const ProblemSpec& spec, const GridSpec& grid,
                                       double alpha, const PicardConfig& picard = {});

/// Small-y growth fit of sup_{x<=x0} |u(y,x)| for the linear solve.
struct BlowupSection {
    double fitted_exponent = 0.0;
    double residual = 0.0;
    int levels_used = 0;
};
BlowupSection run_blowup_rate_suite(const Field& u0_rough, const ProblemSpec& spec,
                                    const GridSpec& grid, double x0 = 2.0);

VerificationReport run_all(const std::vector<std::string>& suites, const SuiteConfig& cfg,
                           bool parallel = false);

const std::vector<std::string>& all_suite_names();

// Manufactured data (documented formulas, shared with the test suites).
double hermite(int k, double x);
Field gaussian_field(const GridSpec& grid, double amplitude = 1.0, double width = 1.0,
                     double center = 0.0);
/// u*(y,x) = exp(-y) exp(-x^2) sampled on the grid.
Trajectory manufactured_solution(const ProblemSpec& spec, const GridSpec& grid);
/// F = L u* for the linear problem, by exact differentiation of u*.
Trajectory manufactured_linear_force(const ProblemSpec& spec, const GridSpec& grid);
/// F = L u* - gamma d_x(u*^2) for the nonlinear problem.
Trajectory manufactured_nonlinear_force(const ProblemSpec& spec, const GridSpec& grid);
/// Smoothly windowed |x|^{-1/4} profile (capped at a quarter cell near 0);
/// in L2 with finite N_{3+eps} but not smooth.
Field rough_profile(const GridSpec& grid);

/// Multiplies the trajectory by 1 + amplitude * eta(x, y) where eta is a
/// fixed band-limited noise field (seeded phases, unit-variance); being a
/// grid-independent function, the corruption survives refinement.
Trajectory corrupt_with_frozen_noise(const Trajectory& t, const GridSpec& grid, double y0,
                                     double amplitude, unsigned long seed);

}  // namespace harness
}  // namespace gkdv
