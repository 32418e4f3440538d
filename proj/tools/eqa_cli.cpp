// Command-line front end: pointwise invariant reports, verification
// campaigns, level-set sampling, and the affine normal flow.
//
// Exit codes: 0 success, 1 usage or parse error, 2 geometric degeneracy
// (critical point, |U(F)| below tolerance, calibration failure).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "eqa/errors.hpp"
#include "eqa/flow.hpp"
#include "eqa/invariants.hpp"
#include "eqa/json_io.hpp"
#include "eqa/ruled.hpp"
#include "eqa/verify.hpp"

namespace {

using namespace eqa;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

/// Comma-separated decimals, or the symbolic idempotent tokens E0, E1, ...
/// (meaningful for symdet fields, whose golden points these are).
Eigen::VectorXd parse_point(const std::string& text, const FieldSpec& field) {
    if (!text.empty() && text[0] == 'E') {
        const int p = std::stoi(text.substr(1));
        int n = 1;
        while (symdet_dim(n) < field.dim) ++n;
        if (symdet_dim(n) != field.dim)
            throw ArgumentError("point token '" + text + "' needs a symdet-shaped field");
        return symdet_idempotent(n, p);
    }
    auto parts = split(text, ',');
    Eigen::VectorXd x(static_cast<int>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        try {
            x[static_cast<int>(i)] = std::stod(parts[i]);
        } catch (...) {
            throw ArgumentError("bad coordinate '" + parts[i] + "' in point '" + text + "'");
        }
    }
    return x;
}

struct FieldSource {
    std::string builtin;
    std::vector<std::string> params;
    std::string expr;
    std::string vars;

    FieldSpec resolve() const {
        const bool has_builtin = !builtin.empty();
        const bool has_expr = !expr.empty();
        if (has_builtin == has_expr)
            throw ArgumentError("exactly one of --builtin or --expr is required");
        if (has_builtin) return make_builtin(builtin, params);
        if (vars.empty()) throw ArgumentError("--expr requires --vars");
        return field_from_expr(expr, split(vars, ','), "expr");
    }
};

void add_field_options(CLI::App* cmd, FieldSource& src) {
    cmd->add_option("--builtin", src.builtin, "builtin field tag");
    cmd->add_option("--param", src.params, "builtin parameter (repeatable)");
    cmd->add_option("--expr", src.expr, "field expression");
    cmd->add_option("--vars", src.vars, "comma-separated variable names for --expr");
}

std::uint64_t seed_or_env(std::optional<std::uint64_t> seed) {
    if (seed) return *seed;
    if (const char* env = std::getenv("EQA_SEED")) return std::strtoull(env, nullptr, 10);
    return 2026;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw ArgumentError("cannot open output file '" + path + "'");
    return file;
}

void write_csv_header(std::ostream& os, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
    os << "\n";
}

RuledField resolve_ruled(const std::string& immersion,
                         const std::vector<std::string>& immersion_params,
                         const std::string& q_text, std::uint64_t seed) {
    CentroaffineImmersion imm = make_immersion(immersion, immersion_params);
    // Q is written over x1..xn, the paper's names for the ruling variables
    std::vector<std::string> qvars;
    for (int i = 1; i <= imm.n; ++i) qvars.push_back("x" + std::to_string(i));
    Ast q = q_text.empty() ? Ast::constant(0.0) : parse(q_text, imm.n, qvars);
    return build_ruled_field(imm, q, 64, static_cast<unsigned>(seed));
}

int cmd_invariants(const FieldSource& src, const std::vector<std::string>& point_texts,
                   const std::string& points_file, double tol_regular, double tol_nondegen,
                   const std::string& format, const std::string& out_path) {
    FieldSpec field = src.resolve();
    Tols tols{tol_regular, tol_nondegen};

    std::vector<std::string> texts = point_texts;
    if (!points_file.empty()) {
        std::ifstream in(points_file);
        if (!in) throw ArgumentError("cannot open points file '" + points_file + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            texts.push_back(line);
        }
    }
    if (texts.empty()) throw ArgumentError("no points given (--point or --points-file)");

    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    os << std::setprecision(17);

    bool degenerate = false;
    bool csv_header = false;
    for (const auto& text : texts) {
        InvariantReport rep = analyze(field, parse_point(text, field), tols);
        degenerate = degenerate || !rep.flags.regular_point || !rep.flags.nondegenerate;
        if (format == "csv") {
            if (!csv_header) {
                std::vector<std::string> names = field.var_names;
                for (const char* extra : {"F", "H", "Ucal", "kappa_eq", "gauss_kronecker",
                                          "regular", "nondegenerate"})
                    names.push_back(extra);
                write_csv_header(os, names);
                csv_header = true;
            }
            for (int i = 0; i < rep.point.size(); ++i) os << rep.point[i] << ",";
            os << rep.F << "," << rep.H << "," << rep.Ucal << ","
               << (rep.normal ? rep.normal->kappa_eq : 0.0) << "," << rep.gauss_kronecker
               << "," << rep.flags.regular_point << "," << rep.flags.nondegenerate << "\n";
        } else {
            os << to_json(rep).dump() << "\n";
        }
    }
    return degenerate ? 2 : 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    if (!verify::known_suite(suite)) {
        std::cerr << "unknown suite '" << suite << "'\n";
        return 1;
    }
    auto results = verify::run_suite(suite, seed);
    bool all_pass = true;
    std::cout << std::left;
    for (const auto& r : results) {
        all_pass = all_pass && r.passed;
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << std::setw(36) << r.id
                  << " worst residual/tol " << std::setprecision(3) << std::scientific
                  << r.worst_ratio << "\n"
                  << std::defaultfloat << "       " << r.detail << "\n";
    }
    std::cout << (all_pass ? "all criteria passed" : "CRITERIA FAILED") << " (suite " << suite
              << ", " << results.size() << " criteria)\n";
    return all_pass ? 0 : 1;
}

int cmd_sample(const std::string& immersion, const std::vector<std::string>& immersion_params,
               const std::string& q_text, double t, const std::string& grid, bool describe,
               std::uint64_t seed, const std::string& out_path) {
    RuledField rf;
    try {
        rf = resolve_ruled(immersion, immersion_params, q_text, seed);
    } catch (const CalibrationError& e) {
        std::cerr << "calibration failure: " << e.what() << "\n";
        return 2;
    } catch (const NonCentroaffineError& e) {
        std::cerr << "calibration failure: " << e.what() << "\n";
        return 2;
    }
    if (describe) {
        std::cout << to_json(rf).dump(2) << "\n";
        return 0;
    }
    const int n = rf.n();

    auto counts = split(grid, 'x');
    if (counts.size() != 2) throw ArgumentError("--grid expects RxS, e.g. 50x50");
    const int nr = std::stoi(counts[0]), ns = std::stoi(counts[1]);
    if (nr < 1 || ns < 1) throw ArgumentError("--grid counts must be positive");

    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    os << std::setprecision(17);
    write_csv_header(os, rf.field.var_names);

    // per-axis lattice: r over the immersion domain, s over [-2, 2]
    std::vector<int> ridx(n, 0), sidx(n, 0);
    auto lattice = [](double lo, double hi, int count, int i) {
        return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
    };
    auto advance = [&](std::vector<int>& idx, int base) {
        for (int d = 0; d < n; ++d) {
            if (++idx[d] < base) return true;
            idx[d] = 0;
        }
        return false;
    };
    long rows = 0;
    do {
        Eigen::VectorXd r(n);
        for (int d = 0; d < n; ++d)
            r[d] = lattice(rf.immersion.domain.lo[d], rf.immersion.domain.hi[d], nr, ridx[d]);
        std::fill(sidx.begin(), sidx.end(), 0);
        do {
            Eigen::VectorXd s(n);
            for (int d = 0; d < n; ++d) s[d] = lattice(-2.0, 2.0, ns, sidx[d]);
            Eigen::VectorXd p = level_parameterization(rf, t, r, s);
            const double f = rf.field.eval(p, 0).value();
            if (std::abs(f - t) > 1e-9) {
                std::cerr << "row failed the level check: |F - t| = " << std::abs(f - t)
                          << "\n";
                return 2;
            }
            for (int i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
            os << "\n";
            ++rows;
        } while (advance(sidx, ns));
    } while (advance(ridx, nr));
    std::cerr << rows << " rows on the level set {F = " << t << "}\n";
    return 0;
}

int cmd_flow(const FieldSource& src, const std::string& immersion,
             const std::vector<std::string>& immersion_params, const std::string& q_text,
             const std::string& point_text, double t_end, int steps, bool exact_compare,
             double tol_regular, double tol_nondegen, const std::string& format,
             const std::string& out_path, std::uint64_t seed) {
    Tols tols{tol_regular, tol_nondegen};
    std::optional<RuledField> rf;
    FieldSpec field;
    if (!immersion.empty()) {
        rf = resolve_ruled(immersion, immersion_params, q_text, seed);
        field = rf->field;
    } else {
        field = src.resolve();
    }
    if (steps < 1) throw ArgumentError("--steps must be >= 1");
    Eigen::VectorXd start = parse_point(point_text, field);

    Trajectory traj;
    try {
        traj = integrate(field, start, t_end, steps, tols);
    } catch (const CriticalPointError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const DegenerateError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    os << std::setprecision(17);
    if (format == "json") {
        os << to_json(traj).dump() << "\n";
    } else {
        std::vector<std::string> names = {"t"};
        for (const auto& v : field.var_names) names.push_back(v);
        names.push_back("F");
        write_csv_header(os, names);
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            os << traj.times[k];
            for (int i = 0; i < traj.points[k].size(); ++i) os << "," << traj.points[k][i];
            os << "," << traj.F_values[k] << "\n";
        }
    }

    auto rep = flow_report(field, {start}, t_end, steps, tols);
    std::cerr << "linearity residual " << rep.max_linearity_residual;
    if (rep.order_measurable)
        std::cerr << ", measured order " << rep.convergence_order;
    else
        std::cerr << ", RK4 exact to rounding on this flow";
    std::cerr << "\n";

    if (exact_compare) {
        if (!rf) throw ArgumentError("--exact-compare needs --immersion");
        // the flow preserves (r, s); compare F along the closed-form ray
        const int n = rf->n();
        Eigen::VectorXd r = start.head(n);
        Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
        const double t0 = field.eval(start, 0).value();
        const double rate = std::pow(std::abs(rf->kappa), 2.0 / (n + 2));
        double err = 0.0;
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            Eigen::VectorXd exact =
                level_parameterization(*rf, t0 - rate * traj.times[k], r, s);
            err = std::max(err, std::abs(field.eval(exact, 0).value() - traj.F_values[k]));
        }
        std::cerr << "exact-flow F comparison max error " << err << "\n";
    }
    return traj.truncated() ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equiaffine level-set invariants, ruled hypersurfaces, affine normal flow"};
    app.require_subcommand(1);

    FieldSource inv_src, flow_src;
    std::vector<std::string> points;
    std::string points_file, format = "json", out_path;
    double tol_regular = 1e-12, tol_nondegen = 1e-10;

    auto* inv = app.add_subcommand("invariants", "pointwise invariant reports");
    add_field_options(inv, inv_src);
    inv->add_option("--point", points, "comma-separated point, or E0/E1/... (repeatable)");
    inv->add_option("--points-file", points_file, "file with one point per line");
    inv->add_option("--tol-regular", tol_regular, "regularity tolerance on |dF|");
    inv->add_option("--tol-nondegen", tol_nondegen, "nondegeneracy tolerance on |U(F)|");
    inv->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    inv->add_option("--out", out_path, "output path (default stdout)");

    std::string suite = "all";
    std::optional<std::uint64_t> seed;
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", suite, "identities | examples | ruled | flow | all");
    ver->add_option("--seed", seed, "campaign seed (or EQA_SEED)");

    std::string immersion, q_text, grid = "50x50";
    std::vector<std::string> immersion_params;
    double t_level = 0.0;
    auto* smp = app.add_subcommand("sample", "CSV point cloud of one level set");
    smp->add_option("--immersion", immersion, "named immersion")->required();
    smp->add_option("--immersion-param", immersion_params, "immersion parameter (repeatable)");
    smp->add_option("--Q", q_text, "inhomogeneity Q over the ruling variables");
    smp->add_option("--t", t_level, "level value");
    smp->add_option("--grid", grid, "RxS lattice counts per axis");
    bool describe = false;
    smp->add_flag("--describe", describe, "print the ruled-field JSON description and exit");
    smp->add_option("--seed", seed, "calibration sampling seed");
    smp->add_option("--out", out_path, "output path (default stdout)");

    std::string flow_point;
    std::string flow_immersion, flow_q;
    std::vector<std::string> flow_immersion_params;
    double t_end = 1.0;
    int steps = 100;
    bool exact_compare = false;
    auto* flw = app.add_subcommand("flow", "integrate the affine normal flow");
    add_field_options(flw, flow_src);
    flw->add_option("--immersion", flow_immersion, "ruled field via a named immersion");
    flw->add_option("--immersion-param", flow_immersion_params, "immersion parameter");
    flw->add_option("--Q", flow_q, "inhomogeneity for --immersion");
    flw->add_option("--point", flow_point, "start point")->required();
    flw->add_option("--t-end", t_end, "flow horizon");
    flw->add_option("--steps", steps, "RK4 step count");
    flw->add_flag("--exact-compare", exact_compare, "compare against the exact ruled flow");
    flw->add_option("--tol-regular", tol_regular);
    flw->add_option("--tol-nondegen", tol_nondegen);
    flw->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    flw->add_option("--out", out_path, "output path (default stdout)");
    flw->add_option("--seed", seed, "calibration sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (inv->parsed())
            return cmd_invariants(inv_src, points, points_file, tol_regular, tol_nondegen,
                                  format, out_path);
        if (ver->parsed()) return cmd_verify(suite, seed_or_env(seed));
        if (smp->parsed())
            return cmd_sample(immersion, immersion_params, q_text, t_level, grid, describe,
                              seed_or_env(seed), out_path);
        if (flw->parsed())
            return cmd_flow(flow_src, flow_immersion, flow_immersion_params, flow_q,
                            flow_point, t_end, steps, exact_compare, tol_regular,
                            tol_nondegen, format, out_path, seed_or_env(seed));
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << " (byte offset " << e.offset << ")\n";
        return 1;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
