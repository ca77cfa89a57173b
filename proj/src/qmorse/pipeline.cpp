#include "qmorse/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

std::string point_str(const Vec& x) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) os << ", ";
        os << x[i];
    }
    os << ")";
    return os.str();
}

}  // namespace

Verification verify_theorem(const ScalarField& f, const std::vector<CriticalCertificate>& certs,
                            const std::vector<NearDegenerateReport>& near_degenerate,
                            const std::vector<MorseChart>& charts, const MorseConstants& mc,
                            bool has_constants, int grid) {
    double psi1 = has_constants ? mc.psi1 : 0.0;
    double d_sep = has_constants ? mc.d_sep : 0.0;
    double n_bound = has_constants ? mc.N_bound : std::numeric_limits<double>::infinity();
    double psi2 = has_constants ? mc.psi2 : 0.0;
    double psi3 = has_constants ? mc.psi3 : 0.0;
    double eta = has_constants ? mc.eta : 0.0;

    Verification ver;
    ver.items.resize(5);
    ver.items[0].label = "i";
    ver.items[1].label = "ii";
    ver.items[2].label = "iii";
    ver.items[3].label = "iv";
    ver.items[4].label = "v";

    // (i) every critical point is non-degenerate at the psi1 floor
    for (const auto& nd : near_degenerate) {
        ver.items[0].pass = false;
        std::ostringstream os;
        os << "sigma_min(Hess) " << nd.sigma_min_hess << " below floor " << psi1 << " at "
           << point_str(nd.point);
        ver.items[0].witness = os.str();
        break;
    }
    if (ver.items[0].pass)
        for (const auto& c : certs)
            if (!(c.sigma_min_hess >= psi1)) {
                ver.items[0].pass = false;
                std::ostringstream os;
                os << "sigma_min(Hess) " << c.sigma_min_hess << " below floor " << psi1
                   << " at " << point_str(c.point);
                ver.items[0].witness = os.str();
                break;
            }

    // (ii) separation and count
    for (std::size_t i = 0; i < certs.size() && ver.items[1].pass; ++i)
        for (std::size_t j = i + 1; j < certs.size(); ++j) {
            double d = vec_dist(certs[i].point, certs[j].point);
            if (d < d_sep) {
                ver.items[1].pass = false;
                std::ostringstream os;
                os << "distance " << d << " below d_sep " << d_sep << " between "
                   << point_str(certs[i].point) << " and " << point_str(certs[j].point);
                ver.items[1].witness = os.str();
                break;
            }
        }
    if (ver.items[1].pass && static_cast<double>(certs.size()) > n_bound) {
        ver.items[1].pass = false;
        std::ostringstream os;
        os << certs.size() << " critical points exceed the covering bound " << n_bound;
        ver.items[1].witness = os.str();
    }

    // (iii) critical-value gaps. A measured C1 can push psi2 far below the
    // resolution of the values being compared; a gap only violates the
    // separation claim when it falls short by more than value-scale rounding.
    for (std::size_t i = 0; i < certs.size() && ver.items[2].pass; ++i)
        for (std::size_t j = i + 1; j < certs.size(); ++j) {
            double gap = std::abs(certs[i].value - certs[j].value);
            double slack =
                1e-12 * (1.0 + std::max(std::abs(certs[i].value), std::abs(certs[j].value)));
            if (gap < psi2 - slack) {
                ver.items[2].pass = false;
                std::ostringstream os;
                os << "value gap " << gap << " below psi2 " << psi2 << " between "
                   << point_str(certs[i].point) << " and " << point_str(certs[j].point);
                ver.items[2].witness = os.str();
                break;
            }
        }

    // (iv) chart residuals
    for (const auto& ch : charts)
        if (!(ch.residual_sup <= ch.residual_tol)) {
            ver.items[3].pass = false;
            std::ostringstream os;
            os << "chart residual " << ch.residual_sup << " above tolerance " << ch.residual_tol
               << " at " << point_str(ch.center);
            ver.items[3].witness = os.str();
            break;
        }

    // (v) small gradient localizes near a certified point
    for (const Vec& x : ball_grid(f.dim(), f.domain_radius(), grid)) {
        double gn = vec_norm(f.jet(x, 1).grad);
        if (gn > eta) continue;
        double dist = std::numeric_limits<double>::infinity();
        for (const auto& c : certs) dist = std::min(dist, vec_dist(x, c.point));
        if (!(dist <= psi3)) {
            ver.items[4].pass = false;
            std::ostringstream os;
            os << "gradient norm " << gn << " within eta " << eta << " at " << point_str(x)
               << " but nearest critical point is " << dist << " away (psi3 " << psi3 << ")";
            ver.items[4].witness = os.str();
            break;
        }
    }
    return ver;
}

AnalysisResult analyze(std::shared_ptr<const FunctionSpec> f0, const AnalyzeOptions& opt) {
    if (!(opt.epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (opt.grid < 8) throw DomainError("grid must be at least 8");
    if (!(opt.newton_tol > 0.0)) throw DomainError("newton_tol must be positive");
    if (opt.quadrature_max < 16) throw DomainError("quadrature_max must be at least 16");

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    AnalysisResult res;
    auto stamp = [&](const char* name) {
        auto t1 = clock::now();
        res.stage_ms.emplace_back(
            name, std::chrono::duration<double, std::milli>(t1 - t0).count());
        t0 = t1;
    };

    res.budget = estimate_budget(*f0, opt.grid);
    stamp("budget");

    int n = f0->dim();
    int k = f0->order_limit();
    res.affine = affine_budget(res.budget);
    if (!res.affine) {
        res.mc = compute_constants(res.budget.K, opt.epsilon, n, k, opt.c_constant, 1.0);
        res.has_constants = true;
    }
    stamp("constants");

    double floor = res.has_constants ? res.mc.psi1 : 1.0;
    if (res.affine || opt.no_perturb) {
        res.field = f0;
        res.iso = isolate_criticals(*f0, res.budget, floor, opt.grid, opt.newton_tol);
        stamp("isolate");
    } else {
        res.rv = select_regular_value(*f0, res.budget, res.mc, opt.grid);
        res.has_regular_value = true;
        stamp("regular_value");

        Perturbation shift;
        shift.v = res.rv.v;
        shift.inner_radius = res.mc.d_sep / 4.0;
        shift.outer_radius = res.mc.d_sep / 2.0;
        shift.h_ck_norm_estimate = vec_norm(res.rv.v);
        PerturbedField shifted(f0, shift);
        IsolationResult pre =
            isolate_criticals(shifted, res.budget, res.mc.psi1, opt.grid, opt.newton_tol);
        stamp("isolate");

        PerturbationResult bp = build_perturbation(f0, res.rv.v, pre.certificates, res.mc);
        res.mc = bp.mc;
        res.pert = bp.pert;
        res.field = bp.field;
        res.perturbed = true;
        stamp("perturb");

        res.iso = isolate_criticals(*res.field, res.budget, res.mc.psi1, opt.grid,
                                    opt.newton_tol);
        stamp("re_isolate");
    }

    if (res.has_constants)
        for (const auto& cert : res.iso.certificates)
            res.charts.push_back(morse_chart(*res.field, cert, res.mc, opt.quadrature_max));
    stamp("charts");

    res.verification = verify_theorem(*res.field, res.iso.certificates, res.iso.near_degenerate,
                                      res.charts, res.mc, res.has_constants, opt.grid);
    stamp("verify");
    return res;
}

}  // namespace qmorse
