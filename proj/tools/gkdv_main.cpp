#include "gkdv/harness.hpp"
#include "gkdv/io.hpp"
#include "gkdv/transforms.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace gkdv;

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const StructuralError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

void warn_edge_decay(const Field& u0) {
    if (!edge_decay_ok(u0))
        std::cerr << "warning: initial data exceeds 1e-14 at the domain edge; "
                     "increase L for a faithful whole-line truncation\n";
}

void maybe_gnuplot(const std::string& outdir, const std::string& csv, bool enabled) {
    if (!enabled) return;
    const std::string script = "set datafile separator ','\n"
                               "set key off\n"
                               "set xlabel 'x'\n"
                               "plot '" +
                               csv + "' using 1:($2) with lines\n";
    write_text_file(outdir + "/plot.gnuplot", script);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gkdv: spectral and kernel solvers for odd-order dispersive equations"};
    app.require_subcommand(1);

    // ain n x
    auto* ain_cmd = app.add_subcommand("ain", "evaluate the oscillatory kernel integral");
    int ain_n = 1;
    double ain_x = 0.0;
    int ain_j = 0;
    double ain_tol = 1e-10;
    ain_cmd->add_option("n", ain_n, "equation order parameter")->required();
    ain_cmd->add_option("x", ain_x, "argument")->required();
    ain_cmd->add_option("--deriv", ain_j, "derivative order (0..2n)");
    ain_cmd->add_option("--tol", ain_tol, "absolute quadrature tolerance");

    // solve-linear --config
    auto* lin_cmd = app.add_subcommand("solve-linear", "spectral solve of the linear problem");
    std::string lin_config, lin_out = "out";
    bool lin_gnuplot = false;
    lin_cmd->add_option("--config", lin_config, "JSON configuration")->required();
    lin_cmd->add_option("--out", lin_out, "output directory");
    lin_cmd->add_flag("--gnuplot", lin_gnuplot, "emit a gnuplot script");

    // solve --config
    auto* nl_cmd = app.add_subcommand("solve", "Picard solve of the nonlinear problem");
    std::string nl_config, nl_out = "out";
    bool nl_gnuplot = false;
    nl_cmd->add_option("--config", nl_config, "JSON configuration")->required();
    nl_cmd->add_option("--out", nl_out, "output directory");
    nl_cmd->add_flag("--gnuplot", nl_gnuplot, "emit a gnuplot script");

    // green --config
    auto* gr_cmd = app.add_subcommand("green", "assemble the Green kernel tables");
    std::string gr_config, gr_out = "out";
    gr_cmd->add_option("--config", gr_config, "JSON configuration")->required();
    gr_cmd->add_option("--out", gr_out, "output directory");

    // norms --traj
    auto* no_cmd = app.add_subcommand("norms", "weighted functionals of a stored trajectory");
    std::string no_traj, no_out;
    int no_n = 1;
    no_cmd->add_option("--traj", no_traj, "trajectory CSV")->required();
    no_cmd->add_option("--out", no_out, "output JSON path (default stdout)");
    no_cmd->add_option("--n", no_n, "equation order parameter for M[u]");

    // verify --suite
    auto* ve_cmd = app.add_subcommand("verify", "run the verification suites");
    std::vector<std::string> ve_suites;
    std::string ve_out = "out";
    unsigned long ve_seed = 12345;
    bool ve_parallel = false;
    ve_cmd->add_option("--suite", ve_suites,
                       "suites to run (airy linear green picard weakform dependence "
                       "blowup-rate), or 'all'");
    ve_cmd->add_option("--out", ve_out, "output directory");
    ve_cmd->add_option("--seed", ve_seed, "seed for sampled checks");
    ve_cmd->add_flag("--parallel", ve_parallel, "run independent suites concurrently");

    CLI11_PARSE(app, argc, argv);

    if (ain_cmd->parsed()) {
        return guarded([&] {
            const AinEvaluator ev(ain_n, ain_tol);
            std::printf("%.15g\n", ev.eval(ain_x, ain_j));
            return 0;
        });
    }

    if (lin_cmd->parsed()) {
        return guarded([&] {
            const RunConfig cfg = load_run_config(lin_config);
            ensure_dir(lin_out);
            const Field u0 = make_initial_field(cfg);
            warn_edge_decay(u0);
            const WellPosednessVerdict verdict = classify_wellposedness(cfg.spec, cfg.grid);
            Trajectory force;
            const Trajectory* fptr = nullptr;
            if (cfg.force_kind == "manufactured-linear") {
                force = harness::manufactured_linear_force(cfg.spec, cfg.grid);
                fptr = &force;
            } else if (cfg.force_kind != "none") {
                throw ConfigError("unsupported force kind for solve-linear: " + cfg.force_kind);
            }
            LinearSolveOptions opts;
            opts.acknowledge_growth = cfg.acknowledge_growth;
            const Trajectory traj = solve_linear(u0, fptr, cfg.spec, cfg.grid, opts);
            write_trajectory_csv(lin_out + "/trajectory.csv", traj, cfg.grid);
            nlohmann::json j;
            j["dissipativity_condition"] = verdict.dissipativity_condition;
            j["spectrum_bounded"] = verdict.spectrum_bounded;
            j["growth_bound"] = verdict.growth_bound;
            j["config"] = nlohmann::json::parse(spec_grid_to_json(cfg.spec, cfg.grid));
            write_text_file(lin_out + "/verdict.json", j.dump(2) + "\n");
            maybe_gnuplot(lin_out, "trajectory.csv", lin_gnuplot);
            std::cout << "wrote " << lin_out << "/trajectory.csv\n";
            return 0;
        });
    }

    if (nl_cmd->parsed()) {
        return guarded([&] {
            const RunConfig cfg = load_run_config(nl_config);
            ensure_dir(nl_out);
            const Field u0 = make_initial_field(cfg);
            warn_edge_decay(u0);
            Trajectory force;
            const Trajectory* fptr = nullptr;
            if (cfg.force_kind == "manufactured-nonlinear") {
                force = harness::manufactured_nonlinear_force(cfg.spec, cfg.grid);
                fptr = &force;
            } else if (cfg.force_kind != "none") {
                throw ConfigError("unsupported force kind for solve: " + cfg.force_kind);
            }
            const double y1 = compute_y1(u0, fptr, cfg.picard, cfg.spec, cfg.grid);
            const auto [traj, trace] = solve_nonlinear(u0, fptr, cfg.spec, cfg.grid, cfg.picard);
            write_trajectory_csv(nl_out + "/trajectory.csv", traj, cfg.grid);

            std::string trace_csv = "window,m,sup_norm2,sup_d2_norm2,diff_l2,seconds\n";
            for (const auto& r : trace.records) {
                char line[256];
                std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g,%.17g,%.6f\n", r.window,
                              r.m, r.sup_norm2, r.sup_d2_norm2, r.diff_l2, r.seconds);
                trace_csv += line;
            }
            write_text_file(nl_out + "/trace.csv", trace_csv);

            nlohmann::json j;
            j["y1"] = std::isfinite(y1) ? nlohmann::json(y1) : nlohmann::json("inf");
            j["window_bounds"] = trace.window_bounds;
            nlohmann::json wy = nlohmann::json::array();
            for (double v : trace.window_y1)
                wy.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"));
            j["window_y1"] = wy;
            j["converged"] = trace.converged;
            j["iterations"] = trace.records.size();
            j["config"] = nlohmann::json::parse(spec_grid_to_json(cfg.spec, cfg.grid));
            write_text_file(nl_out + "/summary.json", j.dump(2) + "\n");
            maybe_gnuplot(nl_out, "trajectory.csv", nl_gnuplot);
            std::cout << "wrote " << nl_out << "/trajectory.csv ("
                      << trace.records.size() << " iterations)\n";
            return 0;
        });
    }

    if (gr_cmd->parsed()) {
        return guarded([&] {
            const RunConfig cfg = load_run_config(gr_config);
            ensure_dir(gr_out);
            const GreenTable gt = build_green(cfg.spec, cfg.grid, cfg.resolvent);
            nlohmann::json extra;
            extra["iterate_norms"] = gt.iterate_norms;
            extra["converged"] = gt.converged;
            write_kernel_binary(gr_out + "/green", gt.g, extra.dump());
            write_kernel_binary(gr_out + "/green_dx", gt.gx, extra.dump());
            const GreenEstimateReport rep = verify_green_estimates(gt);
            nlohmann::json j;
            j["row_y"] = rep.row_y;
            j["left_exponent"] = rep.left_g.exponent;
            j["left_exponent_dx"] = rep.left_gx.exponent;
            j["right_envelope_exponent"] = rep.right_envelope.exponent;
            j["left_residual"] = rep.left_g.residual;
            j["iterate_norms"] = gt.iterate_norms;
            j["converged"] = gt.converged;
            write_text_file(gr_out + "/green_report.json", j.dump(2) + "\n");
            std::cout << "wrote " << gr_out << "/green.bin (+sidecar, report)\n";
            return 0;
        });
    }

    if (no_cmd->parsed()) {
        return guarded([&] {
            const Trajectory traj = read_trajectory_csv(no_traj);
            // grid geometry recovered from the stored x-column is implicit; the
            // functionals only need dx and the samples
            const int N = static_cast<int>(traj.fields.empty() ? 0 : traj.fields[0].size());
            if (N < 16) throw StructuralError("norms: trajectory too small");
            // reconstruct L from the trajectory file
            nlohmann::json j;
            GridSpec grid;
            {
                // x-grid is uniform from -L with step dx; recover from row count
                // and the stored first coordinate
                std::ifstream in(no_traj);
                std::string line;
                std::getline(in, line);
                std::getline(in, line);
                const double x0 = std::stod(line.substr(0, line.find(',')));
                grid.L = -x0;
                grid.N = N;
                grid.M = traj.levels();
            }
            std::vector<double> l2(traj.levels()), n3(traj.levels());
            for (int i = 0; i < traj.levels(); ++i) {
                l2[i] = grid.dx() * traj.fields[i].squaredNorm();
                n3[i] = N_alpha(traj.fields[i], 3.0 + 1.0 / no_n, grid);
            }
            j["levels"] = traj.levels();
            j["l2_squared"] = l2;
            j["n_weighted"] = n3;
            j["m_functional"] = M_functional(traj, no_n, grid);
            j["seminorm_000"] = seminorm(traj, nullptr, 0, 0, 0, grid);
            const std::string text = j.dump(2) + "\n";
            if (no_out.empty())
                std::cout << text;
            else
                write_text_file(no_out, text);
            return 0;
        });
    }

    if (ve_cmd->parsed()) {
        return guarded([&] {
            ensure_dir(ve_out);
            std::vector<std::string> suites = ve_suites;
            if (suites.size() == 1 && suites[0] == "all") suites.clear();
            harness::SuiteConfig cfg;
            cfg.seed = ve_seed;
            const harness::VerificationReport report =
                harness::run_all(suites, cfg, ve_parallel);
            write_text_file(ve_out + "/report.json", report.to_json(true));
            for (const auto& s : report.suites)
                for (const auto& c : s.checks)
                    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << s.suite << "/" << c.name
                              << "  measured=" << c.measured << "\n";
            std::cout << (report.all_pass() ? "all checks passed\n" : "some checks FAILED\n");
            return report.all_pass() ? 0 : 1;
        });
    }

    return 2;
}
