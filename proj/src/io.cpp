#include "gkdv/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gkdv {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot write " + path);
    out << content;
}

void write_field_csv(const std::string& path, const Field& f, const GridSpec& grid) {
    if (f.size() != grid.N) throw StructuralError("write_field_csv: length mismatch");
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot write " + path);
    out << "x,value\n";
    for (int j = 0; j < grid.N; ++j) out << fmt(grid.x(j)) << ',' << fmt(f[j]) << '\n';
}

Field read_field_csv(const std::string& path, const GridSpec& grid) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    Field f(grid.N);
    int j = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2) throw StructuralError("read_field_csv: malformed row");
        if (j >= grid.N) throw StructuralError("read_field_csv: too many rows");
        f[j++] = std::stod(cells[1]);
    }
    if (j != grid.N) throw StructuralError("read_field_csv: row count mismatch");
    return f;
}

void write_trajectory_csv(const std::string& path, const Trajectory& t, const GridSpec& grid) {
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot write " + path);
    out << "x";
    for (Eigen::Index i = 0; i < t.ygrid.size(); ++i) out << ',' << fmt(t.ygrid[i]);
    out << '\n';
    for (int j = 0; j < grid.N; ++j) {
        out << fmt(grid.x(j));
        for (int i = 0; i < t.levels(); ++i) out << ',' << fmt(t.fields[i][j]);
        out << '\n';
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw StructuralError("read_trajectory_csv: empty file");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "x")
        throw StructuralError("read_trajectory_csv: malformed header");
    const int M = static_cast<int>(header.size()) - 1;
    Eigen::VectorXd ys(M);
    for (int i = 0; i < M; ++i) ys[i] = std::stod(header[i + 1]);
    std::vector<std::vector<double>> cols(M);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != M + 1)
            throw StructuralError("read_trajectory_csv: malformed row");
        for (int i = 0; i < M; ++i) cols[i].push_back(std::stod(cells[i + 1]));
    }
    std::vector<Field> fields(M);
    for (int i = 0; i < M; ++i) {
        fields[i] = Eigen::Map<Eigen::VectorXd>(cols[i].data(), cols[i].size());
    }
    return Trajectory(std::move(fields), std::move(ys));
}

void write_kernel_csv(const std::string& path, const KernelTable& t) {
    t.validate();
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot write " + path);
    out << "y,x,value\n";
    for (Eigen::Index r = 0; r < t.values.rows(); ++r)
        for (Eigen::Index c = 0; c < t.values.cols(); ++c)
            out << fmt(t.yvalues[r]) << ',' << fmt(t.xvalues[c]) << ',' << fmt(t.values(r, c))
                << '\n';
}

void write_kernel_binary(const std::string& base, const KernelTable& t,
                         const std::string& extra_json) {
    t.validate();
    std::ofstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw StructuralError("cannot write " + base + ".bin");
    for (Eigen::Index r = 0; r < t.values.rows(); ++r)
        for (Eigen::Index c = 0; c < t.values.cols(); ++c) {
            const double v = t.values(r, c);
            bin.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    json side;
    side["kernel"] = kernel_id_name(t.kernel);
    side["derivative_order"] = t.derivative_order;
    side["rows"] = t.values.rows();
    side["cols"] = t.values.cols();
    side["dtype"] = "float64";
    side["order"] = "row-major";
    side["y"] = std::vector<double>(t.yvalues.data(), t.yvalues.data() + t.yvalues.size());
    side["x"] = std::vector<double>(t.xvalues.data(), t.xvalues.data() + t.xvalues.size());
    if (!extra_json.empty()) side["extra"] = json::parse(extra_json);
    write_text_file(base + ".json", side.dump(2) + "\n");
}

KernelTable read_kernel_binary(const std::string& base) {
    const json side = json::parse(read_text_file(base + ".json"));
    KernelTable t;
    t.kernel = kernel_id_from_name(side.at("kernel").get<std::string>());
    t.derivative_order = side.at("derivative_order").get<int>();
    const Eigen::Index rows = side.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = side.at("cols").get<Eigen::Index>();
    const auto yv = side.at("y").get<std::vector<double>>();
    const auto xv = side.at("x").get<std::vector<double>>();
    t.yvalues = Eigen::Map<const Eigen::VectorXd>(yv.data(), yv.size());
    t.xvalues = Eigen::Map<const Eigen::VectorXd>(xv.data(), xv.size());
    t.values.resize(rows, cols);
    std::ifstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw StructuralError("cannot open " + base + ".bin");
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            double v;
            bin.read(reinterpret_cast<char*>(&v), sizeof(v));
            if (!bin) throw StructuralError("read_kernel_binary: truncated data block");
            t.values(r, c) = v;
        }
    t.validate();
    return t;
}

std::string spec_grid_to_json(const ProblemSpec& spec, const GridSpec& grid) {
    json j;
    j["n"] = spec.n;
    j["b"] = std::vector<double>(spec.b.data(), spec.b.data() + spec.b.size());
    j["gamma"] = spec.gamma;
    j["y0"] = spec.y0;
    j["L"] = grid.L;
    j["N"] = grid.N;
    j["M"] = grid.M;
    return j.dump(2) + "\n";
}

std::pair<ProblemSpec, GridSpec> spec_grid_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw StructuralError(std::string("bad JSON: ") + e.what());
    }
    try {
        const auto bvec = j.value("b", std::vector<double>{});
        Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(bvec.data(), bvec.size());
        ProblemSpec spec(j.at("n").get<int>(), b, j.value("gamma", 0.0), j.at("y0").get<double>());
        GridSpec grid(j.at("L").get<double>(), j.at("N").get<int>(), j.at("M").get<int>());
        return {spec, grid};
    } catch (const json::exception& e) {
        throw StructuralError(std::string("bad config: ") + e.what());
    }
}

RunConfig run_config_from_json(const std::string& text) {
    RunConfig cfg;
    auto [spec, grid] = spec_grid_from_json(text);
    cfg.spec = spec;
    cfg.grid = grid;
    json j = json::parse(text);
    if (j.contains("picard")) {
        const json& p = j["picard"];
        cfg.picard.epsilon = p.value("epsilon", cfg.picard.epsilon);
        cfg.picard.C4 = p.value("C4", cfg.picard.C4);
        cfg.picard.tol = p.value("tol", cfg.picard.tol);
        cfg.picard.max_iter = p.value("max_iter", cfg.picard.max_iter);
        const std::string policy = p.value("window_policy", std::string("auto"));
        if (policy == "single")
            cfg.picard.window_policy = PicardConfig::WindowPolicy::Single;
        else if (policy == "auto")
            cfg.picard.window_policy = PicardConfig::WindowPolicy::Auto;
        else
            throw StructuralError("bad window_policy: " + policy);
        cfg.picard.validate();
    }
    if (j.contains("resolvent")) {
        const json& r = j["resolvent"];
        cfg.resolvent.max_terms = r.value("max_terms", cfg.resolvent.max_terms);
        cfg.resolvent.series_tol = r.value("series_tol", cfg.resolvent.series_tol);
        cfg.resolvent.quad_tol = r.value("quad_tol", cfg.resolvent.quad_tol);
        cfg.resolvent.threads = r.value("threads", cfg.resolvent.threads);
        cfg.resolvent.validate();
    }
    if (j.contains("u0")) {
        const json& u = j["u0"];
        cfg.u0_kind = u.value("kind", cfg.u0_kind);
        cfg.u0_amplitude = u.value("amplitude", cfg.u0_amplitude);
        cfg.u0_width = u.value("width", cfg.u0_width);
        cfg.u0_center = u.value("center", cfg.u0_center);
    }
    if (j.contains("force")) cfg.force_kind = j["force"].value("kind", cfg.force_kind);
    if (j.contains("suites")) cfg.suites = j["suites"].get<std::vector<std::string>>();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.acknowledge_growth = j.value("acknowledge_growth", cfg.acknowledge_growth);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_json(read_text_file(path));
}

Field make_initial_field(const RunConfig& cfg) {
    const GridSpec& g = cfg.grid;
    Field f(g.N);
    for (int j = 0; j < g.N; ++j) {
        const double x = (g.x(j) - cfg.u0_center) / cfg.u0_width;
        if (cfg.u0_kind == "gaussian") {
            f[j] = cfg.u0_amplitude * std::exp(-x * x);
        } else if (cfg.u0_kind == "sech2") {
            const double s = 1.0 / std::cosh(x);
            f[j] = cfg.u0_amplitude * s * s;
        } else if (cfg.u0_kind == "rough") {
            // |x|^{-1/4} capped at a quarter cell, smoothly windowed.
            const double xs = std::abs(g.x(j) - cfg.u0_center) + 0.25 * g.dx();
            const double window = std::exp(-std::pow(x / 4.0, 8));
            f[j] = cfg.u0_amplitude * std::pow(xs, -0.25) * window;
        } else if (cfg.u0_kind == "zero") {
            f[j] = 0.0;
        } else {
            throw StructuralError("unknown u0 kind: " + cfg.u0_kind);
        }
    }
    return f;
}

bool edge_decay_ok(const Field& f, double threshold) {
    const Eigen::Index n = f.size();
    if (n < 4) return true;
    return std::abs(f[0]) < threshold && std::abs(f[1]) < threshold &&
           std::abs(f[n - 1]) < threshold && std::abs(f[n - 2]) < threshold;
}

}  // namespace gkdv
