#pragma once

#include "gkdv/green.hpp"
#include "gkdv/picard.hpp"
#include "gkdv/types.hpp"

#include <string>
#include <utility>

namespace gkdv {

// Fields: two CSV columns x,value.  Trajectories: header row of y-values
// (first cell "x"), one row per grid point.  Kernel tables: long-form CSV
// y,x,value, or a raw little-endian float64 block with a JSON sidecar.

void write_field_csv(const std::string& path, const Field& f, const GridSpec& grid);
Field read_field_csv(const std::string& path, const GridSpec& grid);

void write_trajectory_csv(const std::string& path, const Trajectory& t, const GridSpec& grid);
Trajectory read_trajectory_csv(const std::string& path);

void write_kernel_csv(const std::string& path, const KernelTable& t);

/// Writes <base>.bin (row-major float64) and <base>.json describing dims,
/// kernel id, derivative order and axes; extra metadata (e.g. iterate norms)
/// may be attached by the caller through `extra_json`.
void write_kernel_binary(const std::string& base, const KernelTable& t,
                         const std::string& extra_json = "");
KernelTable read_kernel_binary(const std::string& base);

/// Problem and grid serialize as one flat JSON object
/// {n, b, gamma, y0, L, N, M}.
std::string spec_grid_to_json(const ProblemSpec& spec, const GridSpec& grid);
std::pair<ProblemSpec, GridSpec> spec_grid_from_json(const std::string& text);

/// Full CLI configuration: problem + grid plus optional picard, data and
/// suite sections.
struct RunConfig {
    ProblemSpec spec;
    GridSpec grid;
    PicardConfig picard;
    ResolventConfig resolvent;
    std::string u0_kind = "gaussian";  // gaussian | sech2 | rough | zero
    double u0_amplitude = 1.0;
    double u0_width = 1.0;
    double u0_center = 0.0;
    std::string force_kind = "none";  // none | manufactured-linear | manufactured-nonlinear
    std::vector<std::string> suites;
    unsigned long seed = 12345;
    bool acknowledge_growth = false;
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Library initial-data profiles (documented formulas, no randomness).
Field make_initial_field(const RunConfig& cfg);

/// Warn (non-fatal) when data fails the |u0| < 1e-14 edge-decay requirement.
bool edge_decay_ok(const Field& f, double threshold = 1e-14);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gkdv
