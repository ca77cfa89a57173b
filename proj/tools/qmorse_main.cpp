#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmorse/chart.hpp"
#include "qmorse/covering.hpp"
#include "qmorse/errors.hpp"
#include "qmorse/maps.hpp"
#include "qmorse/pipeline.hpp"
#include "qmorse/report.hpp"
#include "qmorse/sard.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMathFail = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qmorse::Error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw qmorse::Error("cannot write " + out_path);
    out << text;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// One point per row, comma-separated coordinates. Blank lines are skipped.
std::vector<qmorse::Vec> parse_points_csv(const std::string& text) {
    std::vector<qmorse::Vec> points;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        qmorse::Vec p;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw qmorse::Error("non-numeric CSV cell: " + cell);
            }
            while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                ++used;
            if (used != cell.size()) throw qmorse::Error("non-numeric CSV cell: " + cell);
            p.push_back(v);
        }
        if (p.empty()) throw qmorse::Error("empty CSV row");
        if (!points.empty() && p.size() != points.front().size())
            throw qmorse::Error("CSV rows have inconsistent dimension");
        points.push_back(p);
    }
    return points;
}

struct CommonOpts {
    std::string spec_path;
    std::string out_path;
    qmorse::AnalyzeOptions opt;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("spec", c.spec_path, "function spec JSON file")->required();
    cmd->add_option("--epsilon,-e", c.opt.epsilon, "target value-resolution epsilon");
    cmd->add_option("--grid,-g", c.opt.grid, "lattice resolution per axis");
    cmd->add_option("--c", c.opt.c_constant, "entropy-bound constant c");
    cmd->add_option("--seed", c.opt.seed, "seed echoed into the report");
    cmd->add_option("--newton-tol", c.opt.newton_tol, "Newton convergence tolerance");
    cmd->add_option("--quadrature-max", c.opt.quadrature_max, "max quadrature nodes per segment");
    cmd->add_option("--out,-o", c.out_path, "output path (default: stdout)");
}

// Config invariants are usage errors, not math failures; check before any
// computation so they map to exit 2.
void check_config(const qmorse::AnalyzeOptions& opt) {
    if (!(opt.epsilon > 0.0)) throw qmorse::Error("epsilon must be positive");
    if (opt.grid < 8) throw qmorse::Error("grid must be at least 8");
    if (!(opt.c_constant > 0.0)) throw qmorse::Error("c must be positive");
    if (!(opt.newton_tol > 0.0)) throw qmorse::Error("newton tolerance must be positive");
    if (opt.quadrature_max < 16) throw qmorse::Error("quadrature budget must be at least 16");
}

int run_analyze(const CommonOpts& c) {
    std::string bytes;
    std::shared_ptr<qmorse::FunctionSpec> f0;
    try {
        check_config(c.opt);
        bytes = read_file(c.spec_path);
        f0 = qmorse::load_function_spec_json(bytes);
    } catch (const std::exception& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitInputError;
    }
    try {
        qmorse::AnalysisResult res = qmorse::analyze(f0, c.opt);
        std::string report =
            qmorse::render_report(*f0, res, c.opt, c.spec_path, qmorse::fnv1a_hex(bytes));
        write_output(c.out_path, report);
        if (!res.verification.all_pass()) {
            for (const auto& item : res.verification.items)
                if (!item.pass)
                    std::cerr << "qmorse: verdict (" << item.label << ") failed: " << item.witness
                              << "\n";
            return kExitMathFail;
        }
        return kExitOk;
    } catch (const qmorse::Error& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitMathFail;
    }
}

int run_sard(const CommonOpts& c, const std::vector<double>& lambdas,
             const std::vector<double>& epsilons, double delta) {
    std::shared_ptr<qmorse::FunctionSpec> f0;
    std::unique_ptr<qmorse::LambdaProfile> profile;
    try {
        check_config(c.opt);
        if (lambdas.empty()) throw qmorse::Error("--lambdas must be non-empty");
        if (epsilons.empty()) throw qmorse::Error("--epsilons must be non-empty");
        if (!(delta > 0.0)) throw qmorse::Error("--delta must be positive");
        for (double e : epsilons)
            if (!(e > 0.0) || e > delta)
                throw qmorse::Error("each epsilon must satisfy 0 < epsilon <= delta");
        f0 = qmorse::load_function_spec_file(c.spec_path);
        profile = std::make_unique<qmorse::LambdaProfile>(qmorse::Vec(lambdas));
    } catch (const std::exception& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitInputError;
    }
    try {
        qmorse::GradientMap map(f0);
        qmorse::DerivativeBudget budget = qmorse::estimate_budget(*f0, c.opt.grid);
        qmorse::SardParameters params(map.domain_dim(), map.image_dim(), f0->order_limit(),
                                      f0->domain_radius(), budget.K, c.opt.c_constant, delta);
        std::vector<qmorse::SardRow> rows =
            qmorse::sard_compare(map, *profile, params, epsilons, c.opt.grid);
        write_output(c.out_path, qmorse::sard_table_csv(rows));
        return kExitOk;
    } catch (const qmorse::Error& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitMathFail;
    }
}

int run_chart(const CommonOpts& c, const std::vector<double>& point_opt,
              const std::string& csv_path) {
    std::string bytes;
    std::shared_ptr<qmorse::FunctionSpec> f0;
    try {
        check_config(c.opt);
        bytes = read_file(c.spec_path);
        f0 = qmorse::load_function_spec_json(bytes);
        if (!point_opt.empty() && static_cast<int>(point_opt.size()) != f0->dim())
            throw qmorse::Error("--point dimension does not match the spec");
    } catch (const std::exception& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitInputError;
    }
    try {
        qmorse::AnalysisResult res = qmorse::analyze(f0, c.opt);
        if (res.charts.empty()) {
            std::cerr << "qmorse: no chartable critical point\n";
            return kExitMathFail;
        }
        std::size_t pick = 0;
        if (!point_opt.empty()) {
            qmorse::Vec target(point_opt);
            double best = -1.0;
            for (std::size_t i = 0; i < res.charts.size(); ++i) {
                qmorse::Vec d = res.charts[i].center;
                for (int t = 0; t < f0->dim(); ++t) d[t] -= target[t];
                double dist = qmorse::vec_norm(d);
                if (best < 0.0 || dist < best) {
                    best = dist;
                    pick = i;
                }
            }
            if (best > 0.1 * f0->domain_radius()) {
                std::cerr << "qmorse: no critical point near the given point (nearest at distance "
                          << best << ")\n";
                return kExitMathFail;
            }
        }
        const qmorse::MorseChart& ch = res.charts[pick];

        nlohmann::ordered_json rec;
        rec["tool"] = "qmorse";
        rec["tool_version"] = "0.1.0";
        rec["input_digest"] = qmorse::fnv1a_hex(bytes);
        rec["center"] = ch.center;
        rec["center_value"] = ch.center_value;
        rec["radius"] = ch.radius;
        rec["nominal_radius"] = ch.nominal_radius;
        rec["shrunk"] = ch.shrunk;
        rec["l"] = ch.l;
        rec["morse_index"] = f0->dim() - ch.l;
        rec["residual_sup"] = ch.residual_sup;
        rec["residual_tol"] = ch.residual_tol;
        rec["chart_norm_estimate"] = ch.chart_norm_estimate;
        write_output(c.out_path, rec.dump(2) + "\n");

        // Sampling the whole shell grid is only worth it when a table was
        // asked for; stdout stays one JSON document otherwise.
        if (!csv_path.empty()) {
            std::ostringstream csv;
            int n = f0->dim();
            for (int d = 0; d < n; ++d) csv << "x" << d + 1 << ",";
            for (int d = 0; d < n; ++d) csv << "phi" << d + 1 << ",";
            csv << "residual\n";
            if (ch.radius > 0.0) {
                for (const qmorse::Vec& x : qmorse::chart_test_grid(n, ch.center, ch.radius)) {
                    qmorse::Vec y = qmorse::chart_apply(*res.field, ch, x, c.opt.quadrature_max);
                    double r = qmorse::chart_residual(*res.field, ch, x, c.opt.quadrature_max);
                    for (int d = 0; d < n; ++d) csv << fmt17(x[d]) << ",";
                    for (int d = 0; d < n; ++d) csv << fmt17(y[d]) << ",";
                    csv << fmt17(r) << "\n";
                }
            }
            write_output(csv_path, csv.str());
        }
        return kExitOk;
    } catch (const qmorse::Error& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitMathFail;
    }
}

int run_cover(const std::string& points_path, double epsilon, const std::string& out_path) {
    std::vector<qmorse::Vec> points;
    try {
        if (!(epsilon > 0.0)) throw qmorse::Error("epsilon must be positive");
        points = parse_points_csv(read_file(points_path));
    } catch (const std::exception& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitInputError;
    }
    try {
        qmorse::CoveringEstimate est = qmorse::covering_number(points, epsilon);
        nlohmann::ordered_json rec;
        rec["tool"] = "qmorse";
        rec["tool_version"] = "0.1.0";
        rec["epsilon"] = est.epsilon;
        rec["points"] = points.size();
        rec["upper"] = est.upper;
        rec["lower"] = est.lower;
        rec["max_center_dist"] = est.max_center_dist;
        rec["centers"] = est.centers;
        write_output(out_path, rec.dump(2) + "\n");
        return kExitOk;
    } catch (const qmorse::Error& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitMathFail;
    }
}

int run_verify(const std::string& report_path) {
    std::string text;
    try {
        text = read_file(report_path);
    } catch (const std::exception& e) {
        std::cerr << "qmorse: " << e.what() << "\n";
        return kExitInputError;
    }
    switch (qmorse::verify_report(text, std::cerr)) {
        case qmorse::VerifyStatus::Ok:
            return kExitOk;
        case qmorse::VerifyStatus::Mismatch:
            return kExitMathFail;
        default:
            return kExitInputError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantitative Morse toolkit"};
    app.set_version_flag("--version", "0.1.0");
    app.require_subcommand(1);

    CommonOpts an;
    CLI::App* analyze = app.add_subcommand("analyze", "full pipeline: budget to verdicts");
    add_common(analyze, an);
    analyze->add_flag("--no-perturb", an.opt.no_perturb,
                      "skip the perturbation and report raw verdicts");

    CommonOpts sd;
    std::vector<double> lambdas;
    std::vector<double> sard_epsilons;
    double sard_delta = 0.0;
    CLI::App* sard = app.add_subcommand("sard", "near-critical entropy bound vs. empirical table");
    add_common(sard, sd);
    sard->add_option("--lambdas", lambdas, "singular-value thresholds, non-increasing")
        ->required()
        ->delimiter(',');
    sard->add_option("--epsilons", sard_epsilons, "covering scales, each <= delta")
        ->required()
        ->delimiter(',');
    sard->add_option("--delta", sard_delta, "value-ball radius")->required();

    CommonOpts chopt;
    std::vector<double> chart_point;
    std::string chart_csv;
    CLI::App* chart = app.add_subcommand("chart", "normal-form chart at one critical point");
    add_common(chart, chopt);
    chart->add_option("--point", chart_point, "coordinates of the target critical point")
        ->delimiter(',');
    chart->add_option("--csv", chart_csv, "path for the sampled (x, phi, residual) table");
    chart->add_flag("--no-perturb", chopt.opt.no_perturb,
                    "skip the perturbation and chart the raw function");

    std::string cover_points;
    std::string cover_out;
    double cover_eps = 0.0;
    CLI::App* cover = app.add_subcommand("cover", "covering estimate for a point cloud");
    cover->add_option("points", cover_points, "CSV file, one point per row")->required();
    cover->add_option("--epsilon,-e", cover_eps, "ball radius")->required();
    cover->add_option("--out,-o", cover_out, "output path (default: stdout)");

    std::string verify_path;
    CLI::App* verify = app.add_subcommand("verify", "recheck a report against itself");
    verify->add_option("report", verify_path, "report JSON produced by analyze")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    if (analyze->parsed()) return run_analyze(an);
    if (sard->parsed()) return run_sard(sd, lambdas, sard_epsilons, sard_delta);
    if (chart->parsed()) return run_chart(chopt, chart_point, chart_csv);
    if (cover->parsed()) return run_cover(cover_points, cover_eps, cover_out);
    if (verify->parsed()) return run_verify(verify_path);
    return kExitInputError;
}
