#pragma once

// Command-line front end: `select`, `sweep`, and `converge` subcommands.
// Exit codes: 0 success, 1 other errors (e.g. I/O), 2 usage error, 3 no stencil or
// solver failure.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgstencil/ebm.hpp"
#include "cgstencil/interp.hpp"
#include "cgstencil/linsolve.hpp"
#include "cgstencil/oracle.hpp"
#include "cgstencil/stencil.hpp"

namespace cgstencil::cli {

inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kUsage = 2;
inline constexpr int kFailure = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses "i,j" or "i,j,k" (commas or spaces).
inline GridIndex parse_index(std::string text, int dim) {
    for (char& ch : text)
        if (ch == ',') ch = ' ';
    std::istringstream is(text);
    std::vector<int> v;
    int x = 0;
    while (is >> x) v.push_back(x);
    if (!is.eof() || static_cast<int>(v.size()) != dim)
        throw UsageError("expected " + std::to_string(dim) + " integer coordinates, got '" + text + "'");
    return dim == 2 ? GridIndex(v[0], v[1]) : GridIndex(v[0], v[1], v[2]);
}

/// Mask file: one available index "i j [k]" per line; blank lines and '#' comments ignored.
inline std::set<GridIndex> read_mask_file(const std::string& path, int dim) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open mask file '" + path + "'");
    std::set<GridIndex> cells;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            cells.insert(parse_index(line, dim));
        } catch (const UsageError& e) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cells;
}

struct SelectArgs {
    int dim = 2;
    int degree = 2;
    std::string center;
    std::string mask_file;
    std::string prefer, prefer_face, prefer_plane;
};

inline int cmd_select(const SelectArgs& a, std::ostream& out) {
    if (a.dim != 2 && a.dim != 3) throw UsageError("--dim must be 2 or 3");
    if (a.degree != 2 && !(a.degree == 3 && a.dim == 2)) throw UsageError("--degree must be 2, or 3 with --dim 2");
    if (a.dim == 2 && (!a.prefer_face.empty() || !a.prefer_plane.empty()))
        throw UsageError("--prefer-face/--prefer-plane apply to --dim 3");
    if (a.dim == 3 && !a.prefer.empty()) throw UsageError("--prefer applies to --dim 2; use --prefer-face/--prefer-plane");
    auto direction = [&](const std::string& s) -> std::optional<Direction> {
        if (s.empty()) return std::nullopt;
        Direction d;
        try {
            d = parse_direction(s);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (d.axis >= a.dim) throw UsageError("direction '" + s + "' is not available in " + std::to_string(a.dim) + "D");
        return d;
    };
    const GridIndex center =
        a.center.empty() ? (a.dim == 2 ? GridIndex(0, 0) : GridIndex(0, 0, 0)) : parse_index(a.center, a.dim);
    const AvailabilityMask mask = a.mask_file.empty() ? all_available() : available_set(read_mask_file(a.mask_file, a.dim));

    StencilSelection sel;
    if (a.dim == 2)
        sel = a.degree == 2 ? select_2d_quadratic(center, mask, direction(a.prefer))
                            : select_2d_cubic(center, mask, direction(a.prefer));
    else
        sel = select_3d_quadratic(center, mask, direction(a.prefer_face), direction(a.prefer_plane));

    const Eigen::MatrixXd V = assemble_vandermonde(lattice_offsets(sel), MonomialBasis(sel.dim, sel.degree), LocalFrame{});
    out << "center: " << to_string(center) << '\n';
    out << "nodes (" << sel.nodes.size() << "): " << nodes_string(sel.nodes) << '\n';
    out << "choices: " << sel.choices.describe() << '\n';
    out << std::setprecision(12) << "det: " << V.determinant() << '\n';
    out << std::setprecision(6) << "condition: " << condition_number(V) << '\n';
    return kOk;
}

struct SweepArgs {
    std::string algorithm;
    std::string out;
    int threads = 1;
};

inline int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    if (a.threads < 1) throw UsageError("--threads must be at least 1");
    const SweepOptions opt{a.threads};
    std::vector<ConfigReport> reports;
    if (a.algorithm == "improved2d")
        reports = enumerate_improved_2d(opt);
    else if (a.algorithm == "improved3d")
        reports = enumerate_improved_3d(opt);
    else if (a.algorithm == "original2d")
        reports = enumerate_original_2d(opt);
    else
        throw UsageError("unknown --algorithm '" + a.algorithm + "'");

    if (!a.out.empty()) {
        std::ofstream f(a.out);
        if (!f) throw std::runtime_error("cannot write '" + a.out + "'");
        write_report_csv(f, reports);
    }
    const auto s = summarize(reports);
    out << s.count << " configurations, " << s.singular << " singular\n";
    out << std::setprecision(6) << "min |det|: " << s.min_abs_det << "\n";
    out << "max condition (non-singular): " << s.max_condition_nonsingular << "\n";
    if (s.singular > 0) {
        out << "singular class (" << (singular_set_dihedral_closed(reports) ? "closed" : "not closed")
            << " under the dihedral group):\n";
        for (const auto& r : reports)
            if (r.singular) out << "  " << r.id << ' ' << r.choices << " nodes " << nodes_string(r.nodes) << '\n';
    }
    return kOk;
}

struct ConvergeConfig {
    std::vector<int> meshes{10, 20, 40};
    double tol = 1e-10;
    int max_iter = 20000;
    std::string format = "csv";
    std::string out;
    int threads = 1;
    int dim = 3;
    bool no_interface = false;
    std::string dump;  // Matrix Market prefix; empty disables
};

inline void validate(const ConvergeConfig& c) {
    if (c.meshes.empty()) throw UsageError("mesh list is empty");
    for (std::size_t i = 0; i < c.meshes.size(); ++i) {
        if (c.meshes[i] < 4) throw UsageError("mesh sizes must be at least 4");
        if (i > 0 && c.meshes[i] <= c.meshes[i - 1]) throw UsageError("mesh sizes must be ascending");
    }
    if (!(c.tol > 0.0)) throw UsageError("tol must be positive");
    if (c.max_iter < 1) throw UsageError("max_iter must be positive");
    if (c.format != "csv" && c.format != "json") throw UsageError("format must be csv or json");
    if (c.threads < 1) throw UsageError("threads must be at least 1");
    if (c.dim != 2 && c.dim != 3) throw UsageError("dim must be 2 or 3");
}

/// Applies keys of a JSON config object: meshes, tol, max_iter, format, out, threads.
inline void apply_config_file(const std::string& path, ConvergeConfig& c) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        if (!j.is_object()) throw UsageError("config file must hold a JSON object");
        for (const auto& [key, value] : j.items()) {
            if (key == "meshes")
                c.meshes = value.get<std::vector<int>>();
            else if (key == "tol")
                c.tol = value.get<double>();
            else if (key == "max_iter")
                c.max_iter = value.get<int>();
            else if (key == "format")
                c.format = value.get<std::string>();
            else if (key == "out")
                c.out = value.get<std::string>();
            else if (key == "threads")
                c.threads = value.get<int>();
            else
                throw UsageError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

struct ConvergeRow {
    int mesh = 0;
    double linf = 0.0;
    std::optional<double> order;
    int iterations = 0;
    double seconds = 0.0;
    double residual = 0.0;
    int unknowns = 0;
};

inline nlohmann::json to_json(const ConvergeConfig& c, const std::vector<ConvergeRow>& rows, const std::string& status) {
    nlohmann::json j;
    j["problem"] = c.no_interface ? "smooth-poisson" : "manufactured-sphere";
    j["dim"] = c.dim;
    j["tol"] = c.tol;
    j["status"] = status;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"mesh", r.mesh},           {"linf_error", r.linf}, {"iterations", r.iterations},
                           {"seconds", r.seconds},     {"residual", r.residual}, {"unknowns", r.unknowns}};
        row["order"] = r.order ? nlohmann::json(*r.order) : nlohmann::json(nullptr);
        j["rows"].push_back(row);
    }
    return j;
}

inline void write_csv_header(std::ostream& os) { os << "mesh,linf_error,order,iterations,seconds,residual,unknowns\n"; }

inline void write_csv_row(std::ostream& os, const ConvergeRow& r) {
    os << r.mesh << ',' << std::setprecision(10) << r.linf << ',';
    if (r.order) os << std::setprecision(6) << *r.order;
    os << ',' << r.iterations << ',' << std::setprecision(4) << r.seconds << ',' << std::setprecision(6) << r.residual << ','
       << r.unknowns << '\n';
    os.flush();
}

inline void dump_system(const std::string& prefix, int mesh, const SparseSystem& sys) {
    std::ofstream a(prefix + "_" + std::to_string(mesh) + ".mtx");
    std::ofstream b(prefix + "_" + std::to_string(mesh) + "_rhs.mtx");
    if (!a || !b) throw std::runtime_error("cannot write matrix dump with prefix '" + prefix + "'");
    write_matrix_market(a, sys.A);
    write_vector_market(b, sys.rhs);
}

inline int cmd_converge(const ConvergeConfig& c, std::ostream& out, std::ostream& err) {
    validate(c);
    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw std::runtime_error("cannot write '" + c.out + "'");
    }
    std::ostream& table = c.out.empty() ? out : file;
    if (c.format == "csv") write_csv_header(table);

    std::vector<ConvergeRow> rows;
    auto finish = [&](const std::string& status) {
        if (c.format == "json") table << to_json(c, rows, status).dump(2) << '\n';
        table.flush();
    };
    MeasureOptions mo;
    mo.tol = c.tol;
    mo.max_iter = c.max_iter;
    mo.ebm.threads = c.threads;
    for (int n : c.meshes) {
        const EbmProblem pb = c.no_interface ? smooth_poisson_case(n, c.dim) : manufactured_case(n, 1.0, 0.001, c.dim);
        MeasureResult m;
        try {
            if (!c.dump.empty()) dump_system(c.dump, n, discretize(pb, mo.ebm).system);
            m = solve_and_measure(pb, mo);
        } catch (const std::exception&) {
            finish("failed");
            throw;
        }
        ConvergeRow row{n, m.linf, std::nullopt, m.iterations, m.seconds, m.residual, m.unknowns};
        if (!rows.empty() && rows.back().linf > 0.0 && m.linf > 0.0)
            row.order = std::log2(rows.back().linf / m.linf) / std::log2(static_cast<double>(n) / rows.back().mesh);
        rows.push_back(row);
        if (c.format == "csv") write_csv_row(table, row);
        if (!c.out.empty())
            err << "mesh " << n << ": linf " << std::setprecision(6) << m.linf << ", " << m.iterations << " iterations, "
                << std::setprecision(3) << m.seconds << " s\n";
    }
    finish("ok");
    return kOk;
}

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Cartesian-grid interpolation stencils and embedded-boundary interface solver"};
    app.require_subcommand(1);

    SelectArgs sa;
    auto* select = app.add_subcommand("select", "select an interpolation stencil and report its Vandermonde determinant");
    select->add_option("--dim", sa.dim, "2 or 3")->capture_default_str();
    select->add_option("--degree", sa.degree, "2, or 3 in 2D")->capture_default_str();
    select->add_option("--center", sa.center, "center index, e.g. 5,5 (default: origin)");
    select->add_option("--mask", sa.mask_file, "whitelist file of available indices, one 'i j [k]' per line");
    select->add_option("--prefer", sa.prefer, "2D preferred direction (west|east|south|north or -x,+x,...)");
    select->add_option("--prefer-face", sa.prefer_face, "3D preferred first-layer face direction");
    select->add_option("--prefer-plane", sa.prefer_plane, "3D preferred second-layer plane direction");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "enumerate every configuration of a selection algorithm");
    sweep->add_option("--algorithm", sw.algorithm, "improved2d|improved3d|original2d")->required();
    sweep->add_option("--out", sw.out, "CSV report path");
    sweep->add_option("--threads", sw.threads, "worker threads")->capture_default_str();

    ConvergeConfig cc;
    std::string config_path, meshes_text;
    auto* converge = app.add_subcommand("converge", "mesh convergence study of the embedded-boundary solver");
    converge->add_option("--config", config_path, "JSON config file (keys: meshes, tol, max_iter, format, out, threads)");
    auto* o_meshes = converge->add_option("--meshes", meshes_text, "comma-separated cells per axis, ascending");
    auto* o_tol = converge->add_option("--tol", cc.tol, "relative residual tolerance");
    auto* o_iter = converge->add_option("--max-iter", cc.max_iter, "iteration limit");
    auto* o_format = converge->add_option("--format", cc.format, "csv|json");
    auto* o_out = converge->add_option("--out", cc.out, "output path (default: stdout)");
    auto* o_threads = converge->add_option("--threads", cc.threads, "worker threads for assembly");
    converge->add_option("--dim", cc.dim, "2 or 3")->capture_default_str();
    converge->add_flag("--no-interface", cc.no_interface, "smooth Poisson problem without an interface");
    converge->add_option("--dump-matrix", cc.dump, "write each system as PREFIX_<mesh>.mtx and PREFIX_<mesh>_rhs.mtx");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    try {
        if (*select) return cmd_select(sa, out);
        if (*sweep) return cmd_sweep(sw, out);

        // the config file supplies defaults; explicit flags win
        ConvergeConfig flags = cc;
        if (!config_path.empty()) apply_config_file(config_path, cc);
        if (o_meshes->count()) {
            std::string t = meshes_text;
            for (char& ch : t)
                if (ch == ',') ch = ' ';
            std::istringstream is(t);
            cc.meshes.clear();
            int n = 0;
            while (is >> n) cc.meshes.push_back(n);
            if (!is.eof()) throw UsageError("--meshes expects comma-separated integers");
        }
        if (o_tol->count()) cc.tol = flags.tol;
        if (o_iter->count()) cc.max_iter = flags.max_iter;
        if (o_format->count()) cc.format = flags.format;
        if (o_out->count()) cc.out = flags.out;
        if (o_threads->count()) cc.threads = flags.threads;
        return cmd_converge(cc, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const NoStencil& e) {
        err << e.what() << '\n';
        return kFailure;
    } catch (const SolverDiverged& e) {
        err << e.what() << '\n';
        return kFailure;
    } catch (const SingularSystem& e) {
        err << e.what() << '\n';
        return kFailure;
    } catch (const ZeroDiagonal& e) {
        err << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

}  // namespace cgstencil::cli
