#include "qmorse/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmorse/errors.hpp"

namespace qmorse {

using ordered_json = nlohmann::ordered_json;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a:") + buf;
}

namespace {

std::string fmt_double(double v) {
    if (!std::isfinite(v)) throw Error("non-finite value cannot enter a report");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void dump_string(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

bool is_primitive(const ordered_json& j) {
    return !j.is_object() && !j.is_array();
}

void dump_value(const ordered_json& j, std::string& out, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    std::string pad1(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad1;
            dump_string(it.key(), out);
            out += ": ";
            dump_value(it.value(), out, indent + 1);
        }
        out += "\n" + pad + "}";
    } else if (j.is_array()) {
        bool flat = true;
        for (const auto& e : j)
            if (!is_primitive(e)) flat = false;
        if (j.empty()) {
            out += "[]";
        } else if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump_value(j[i], out, indent);
            }
            out += "]";
        } else {
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad1;
                dump_value(j[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
        }
    } else if (j.is_string()) {
        dump_string(j.get<std::string>(), out);
    } else if (j.is_boolean()) {
        out += j.get<bool>() ? "true" : "false";
    } else if (j.is_number_integer()) {
        out += std::to_string(j.get<long long>());
    } else if (j.is_number_unsigned()) {
        out += std::to_string(j.get<unsigned long long>());
    } else if (j.is_number_float()) {
        out += fmt_double(j.get<double>());
    } else {
        out += "null";
    }
}

ordered_json vec_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(x);
    return a;
}

ordered_json constants_json(const MorseConstants& mc) {
    ordered_json c;
    c["K"] = mc.K;
    c["eps"] = mc.eps;
    c["k"] = mc.k;
    c["n"] = mc.n;
    c["Rk"] = mc.Rk;
    c["r_eps"] = mc.r_eps;
    c["gamma"] = mc.gamma;
    c["psi1"] = mc.psi1;
    c["d_sep"] = mc.d_sep;
    c["N_bound"] = mc.N_bound;
    c["C1"] = mc.C1;
    c["psi2"] = mc.psi2;
    c["psi3"] = mc.psi3;
    c["sigma"] = mc.sigma;
    c["r_loc"] = mc.r_loc;
    c["eta"] = mc.eta;
    return c;
}

}  // namespace

std::string render_report(const FunctionSpec& spec, const AnalysisResult& res,
                          const AnalyzeOptions& opt, const std::string& input_path,
                          const std::string& digest) {
    ordered_json j;
    j["tool"] = "qmorse";
    j["tool_version"] = "0.1.0";
    j["input_path"] = input_path;
    j["input_digest"] = digest;

    ordered_json cfg;
    cfg["epsilon"] = opt.epsilon;
    cfg["grid"] = opt.grid;
    cfg["c_constant"] = opt.c_constant;
    cfg["newton_tol"] = opt.newton_tol;
    cfg["quadrature_max"] = opt.quadrature_max;
    cfg["seed"] = opt.seed;
    cfg["no_perturb"] = opt.no_perturb;
    j["config"] = cfg;

    ordered_json sp;
    sp["dim"] = spec.dim();
    sp["k"] = spec.order_limit();
    sp["expr"] = spec.expr_text();
    sp["domain_radius"] = spec.domain_radius();
    j["spec"] = sp;

    ordered_json bj;
    bj["K"] = res.budget.K;
    bj["per_order_sup"] = vec_json(res.budget.per_order_sup);
    bj["ck_norm"] = res.budget.ck_norm;
    bj["grid_resolution"] = res.budget.grid_resolution;
    j["budget"] = bj;

    j["affine"] = res.affine;
    if (res.has_constants) j["constants"] = constants_json(res.mc);

    if (res.has_regular_value) {
        ordered_json rv;
        rv["v"] = vec_json(res.rv.v);
        rv["dist_to_sample"] = res.rv.dist_to_sample;
        rv["sample_size"] = res.rv.sample_size;
        rv["grid_adequate"] = res.rv.grid_adequate;
        j["regular_value"] = rv;
    }

    if (res.perturbed) {
        ordered_json pj;
        pj["v"] = vec_json(res.pert.v);
        ordered_json centers = ordered_json::array();
        for (const Vec& c : res.pert.bump_centers) centers.push_back(vec_json(c));
        pj["bump_centers"] = centers;
        pj["bump_coeffs"] = vec_json(res.pert.bump_coeffs);
        pj["inner_radius"] = res.pert.inner_radius;
        pj["outer_radius"] = res.pert.outer_radius;
        pj["h_ck_norm_estimate"] = res.pert.h_ck_norm_estimate;
        j["perturbation"] = pj;
    }

    ordered_json certs = ordered_json::array();
    for (const auto& c : res.iso.certificates) {
        ordered_json cj;
        cj["point"] = vec_json(c.point);
        cj["value"] = c.value;
        cj["uniqueness_radius"] = c.uniqueness_radius;
        cj["sigma_min_hess"] = c.sigma_min_hess;
        cj["morse_index"] = c.morse_index;
        cj["hess_spectrum"] = vec_json(c.hess_spectrum);
        certs.push_back(cj);
    }
    j["certificates"] = certs;

    ordered_json nds = ordered_json::array();
    for (const auto& ndr : res.iso.near_degenerate) {
        ordered_json nj;
        nj["point"] = vec_json(ndr.point);
        nj["value"] = ndr.value;
        nj["sigma_min_hess"] = ndr.sigma_min_hess;
        nj["hess_spectrum"] = vec_json(ndr.hess_spectrum);
        nds.push_back(nj);
    }
    j["near_degenerate"] = nds;

    ordered_json charts = ordered_json::array();
    for (const auto& ch : res.charts) {
        ordered_json cj;
        cj["center"] = vec_json(ch.center);
        cj["center_value"] = ch.center_value;
        cj["radius"] = ch.radius;
        cj["nominal_radius"] = ch.nominal_radius;
        cj["shrunk"] = ch.shrunk;
        cj["l"] = ch.l;
        cj["residual_sup"] = ch.residual_sup;
        cj["residual_tol"] = ch.residual_tol;
        cj["chart_norm_estimate"] = ch.chart_norm_estimate;
        charts.push_back(cj);
    }
    j["charts"] = charts;

    ordered_json ver;
    ordered_json items = ordered_json::array();
    for (const auto& it : res.verification.items) {
        ordered_json ij;
        ij["label"] = it.label;
        ij["pass"] = it.pass;
        ij["witness"] = it.witness;
        items.push_back(ij);
    }
    ver["items"] = items;
    ver["all_pass"] = res.verification.all_pass();
    j["verification"] = ver;

    ordered_json tj;
    for (const auto& [name, ms] : res.stage_ms) tj[name] = ms;
    j["timings_ms"] = tj;

    std::string out;
    dump_value(j, out, 0);
    out += "\n";
    return out;
}

namespace {

struct BadReport {
    std::string msg;
};
struct ReportMismatch {
    std::string msg;
};

const ordered_json& need(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw BadReport{std::string("missing key: ") + key};
    return *it;
}

double need_num(const ordered_json& j, const char* key) {
    const ordered_json& v = need(j, key);
    if (!v.is_number()) throw BadReport{std::string("not a number: ") + key};
    return v.get<double>();
}

Vec need_vec(const ordered_json& j, const char* key) {
    const ordered_json& v = need(j, key);
    if (!v.is_array()) throw BadReport{std::string("not an array: ") + key};
    Vec out;
    for (const auto& e : v) {
        if (!e.is_number()) throw BadReport{std::string("non-numeric entry in ") + key};
        out.push_back(e.get<double>());
    }
    return out;
}

void expect(bool ok, const std::string& what) {
    if (!ok) throw ReportMismatch{what};
}

void expect_eq(double got, double stored, const std::string& what) {
    if (!(got == stored)) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": recomputed " << got << " vs stored " << stored;
        throw ReportMismatch{os.str()};
    }
}

}  // namespace

VerifyStatus verify_report(const std::string& report_json, std::ostream& log) {
    ordered_json j;
    try {
        j = ordered_json::parse(report_json);
    } catch (const std::exception& e) {
        log << "not a report: " << e.what() << "\n";
        return VerifyStatus::Invalid;
    }

    try {
        if (!j.is_object() || need(j, "tool") != "qmorse") throw BadReport{"not a qmorse report"};
        if (need(j, "tool_version") != "0.1.0")
            throw BadReport{"report from a different tool version"};

        const ordered_json& cfg = need(j, "config");
        AnalyzeOptions opt;
        opt.epsilon = need_num(cfg, "epsilon");
        opt.grid = static_cast<int>(need_num(cfg, "grid"));
        opt.c_constant = need_num(cfg, "c_constant");
        opt.newton_tol = need_num(cfg, "newton_tol");
        opt.quadrature_max = static_cast<int>(need_num(cfg, "quadrature_max"));
        opt.no_perturb = need(cfg, "no_perturb").get<bool>();

        const ordered_json& sp = need(j, "spec");
        auto f0 = std::make_shared<FunctionSpec>(
            static_cast<int>(need_num(sp, "dim")), static_cast<int>(need_num(sp, "k")),
            need(sp, "expr").get<std::string>(), need_num(sp, "domain_radius"));
        int n = f0->dim();
        int k = f0->order_limit();

        // Digest: binding only when the recorded input file is still present.
        std::string path = need(j, "input_path").get<std::string>();
        std::ifstream in(path, std::ios::binary);
        if (in) {
            std::ostringstream bytes;
            bytes << in.rdbuf();
            if (fnv1a_hex(bytes.str()) != need(j, "input_digest").get<std::string>()) {
                log << "input digest mismatch for " << path << "\n";
                return VerifyStatus::Invalid;
            }
        } else if (!path.empty()) {
            log << "input file " << path << " not found; digest unchecked\n";
        }

        try {
            const ordered_json& bj = need(j, "budget");
            DerivativeBudget budget = estimate_budget(*f0, opt.grid);
            expect_eq(budget.K, need_num(bj, "K"), "budget.K");
            expect_eq(budget.ck_norm, need_num(bj, "ck_norm"), "budget.ck_norm");
            Vec sup = need_vec(bj, "per_order_sup");
            expect(sup.size() == budget.per_order_sup.size(), "budget.per_order_sup size");
            for (std::size_t i = 0; i < sup.size(); ++i)
                expect_eq(budget.per_order_sup[i], sup[i], "budget.per_order_sup");

            bool affine = affine_budget(budget);
            expect(need(j, "affine").get<bool>() == affine, "affine flag");
            bool has_constants = j.contains("constants");
            expect(has_constants == !affine, "constants presence");

            MorseConstants mc;
            if (has_constants) {
                const ordered_json& cj = need(j, "constants");
                mc = compute_constants(budget.K, opt.epsilon, n, k, opt.c_constant,
                                       need_num(cj, "C1"));
                expect_eq(mc.Rk, need_num(cj, "Rk"), "constants.Rk");
                expect_eq(mc.r_eps, need_num(cj, "r_eps"), "constants.r_eps");
                expect_eq(mc.gamma, need_num(cj, "gamma"), "constants.gamma");
                expect_eq(mc.psi1, need_num(cj, "psi1"), "constants.psi1");
                expect_eq(mc.d_sep, need_num(cj, "d_sep"), "constants.d_sep");
                expect_eq(mc.N_bound, need_num(cj, "N_bound"), "constants.N_bound");
                expect_eq(mc.psi2, need_num(cj, "psi2"), "constants.psi2");
                expect_eq(mc.psi3, need_num(cj, "psi3"), "constants.psi3");
                expect_eq(mc.sigma, need_num(cj, "sigma"), "constants.sigma");
                expect_eq(mc.r_loc, need_num(cj, "r_loc"), "constants.r_loc");
                expect_eq(mc.eta, need_num(cj, "eta"), "constants.eta");
                expect_eq(mc.K, need_num(cj, "K"), "constants.K");
                expect_eq(mc.eps, need_num(cj, "eps"), "constants.eps");
            }

            std::shared_ptr<const ScalarField> field = f0;
            if (j.contains("perturbation")) {
                const ordered_json& pj = need(j, "perturbation");
                Perturbation pert;
                pert.v = need_vec(pj, "v");
                for (const auto& c : need(pj, "bump_centers")) {
                    Vec center;
                    for (const auto& e : c) center.push_back(e.get<double>());
                    pert.bump_centers.push_back(center);
                }
                pert.bump_coeffs = need_vec(pj, "bump_coeffs");
                pert.inner_radius = need_num(pj, "inner_radius");
                pert.outer_radius = need_num(pj, "outer_radius");
                pert.h_ck_norm_estimate = need_num(pj, "h_ck_norm_estimate");
                expect(pert.bump_centers.size() == pert.bump_coeffs.size(),
                       "perturbation center/coefficient counts");
                expect(vec_norm(pert.v) < opt.epsilon / 2.0 || vec_norm(pert.v) == 0.0,
                       "perturbation shift exceeds eps/2");
                if (!pert.bump_coeffs.empty()) {
                    double unit = pert.bump_coeffs[0];
                    for (std::size_t i = 0; i < pert.bump_coeffs.size(); ++i)
                        expect_eq(static_cast<double>(i + 1) * unit, pert.bump_coeffs[i],
                                  "bump coefficient ladder");
                }
                field = std::make_shared<PerturbedField>(f0, pert);
            }

            // Re-isolate and compare the certified set point for point.
            double floor = has_constants ? mc.psi1 : 1.0;
            IsolationResult iso =
                isolate_criticals(*field, budget, floor, opt.grid, opt.newton_tol);
            const ordered_json& certs = need(j, "certificates");
            const ordered_json& nds = need(j, "near_degenerate");
            expect(certs.size() == iso.certificates.size(), "certificate count");
            expect(nds.size() == iso.near_degenerate.size(), "near-degenerate count");
            for (std::size_t i = 0; i < certs.size(); ++i) {
                const ordered_json& cj = certs[i];
                const CriticalCertificate& c = iso.certificates[i];
                Vec pt = need_vec(cj, "point");
                expect(pt.size() == static_cast<std::size_t>(n), "certificate point dim");
                for (int d = 0; d < n; ++d)
                    expect_eq(c.point[d], pt[d], "certificate point");
                expect_eq(c.value, need_num(cj, "value"), "certificate value");
                expect_eq(c.uniqueness_radius, need_num(cj, "uniqueness_radius"),
                          "uniqueness radius");
                expect_eq(c.sigma_min_hess, need_num(cj, "sigma_min_hess"),
                          "certificate sigma_min");
                expect(c.morse_index == static_cast<int>(need_num(cj, "morse_index")),
                       "morse index");
                Vec spec_vals = need_vec(cj, "hess_spectrum");
                expect(spec_vals.size() == c.hess_spectrum.size(), "spectrum size");
                for (std::size_t t = 0; t < spec_vals.size(); ++t)
                    expect_eq(c.hess_spectrum[t], spec_vals[t], "hess spectrum");
            }
            for (std::size_t i = 0; i < nds.size(); ++i) {
                Vec pt = need_vec(nds[i], "point");
                for (int d = 0; d < n; ++d)
                    expect_eq(iso.near_degenerate[i].point[d], pt[d], "near-degenerate point");
                expect_eq(iso.near_degenerate[i].sigma_min_hess,
                          need_num(nds[i], "sigma_min_hess"), "near-degenerate sigma_min");
            }

            // Charts: structural recheck against the stored ledger.
            const ordered_json& charts = need(j, "charts");
            std::vector<MorseChart> chart_objs;
            for (const auto& cj : charts) {
                MorseChart ch;
                ch.center = need_vec(cj, "center");
                ch.center_value = need_num(cj, "center_value");
                ch.radius = need_num(cj, "radius");
                ch.nominal_radius = need_num(cj, "nominal_radius");
                ch.residual_sup = need_num(cj, "residual_sup");
                ch.residual_tol = need_num(cj, "residual_tol");
                ch.l = static_cast<int>(need_num(cj, "l"));
                expect(has_constants, "charts without a constants ledger");
                expect_eq(ch.center_value, field->value(ch.center), "chart center value");
                expect_eq(ch.residual_tol, 1e-8 * (1.0 + mc.K), "chart residual tolerance");
                expect_eq(ch.nominal_radius, mc.psi3, "chart nominal radius");
                expect(ch.radius <= ch.nominal_radius, "chart radius above nominal");
                JetValue jv = field->jet(ch.center, 2);
                Mat A = jv.hess;
                for (double& a : A.a) a *= 0.5;
                expect(normalizer(A).l == ch.l, "chart inertia");
                chart_objs.push_back(ch);
            }

            Verification ver = verify_theorem(*field, iso.certificates, iso.near_degenerate,
                                              chart_objs, mc, has_constants, opt.grid);
            const ordered_json& vj = need(j, "verification");
            const ordered_json& items = need(vj, "items");
            expect(items.size() == ver.items.size(), "verification item count");
            bool all = true;
            for (std::size_t i = 0; i < items.size(); ++i) {
                bool stored = need(items[i], "pass").get<bool>();
                expect(stored == ver.items[i].pass,
                       "verdict (" + ver.items[i].label + ") does not reproduce");
                all = all && stored;
            }
            expect(need(vj, "all_pass").get<bool>() == all, "all_pass flag");
        } catch (const ReportMismatch& m) {
            log << "mismatch: " << m.msg << "\n";
            return VerifyStatus::Mismatch;
        } catch (const Error& e) {
            log << "mismatch: recomputation failed: " << e.what() << "\n";
            return VerifyStatus::Mismatch;
        }
        return VerifyStatus::Ok;
    } catch (const BadReport& b) {
        log << "invalid report: " << b.msg << "\n";
        return VerifyStatus::Invalid;
    } catch (const std::exception& e) {
        log << "invalid report: " << e.what() << "\n";
        return VerifyStatus::Invalid;
    }
}

}  // namespace qmorse
