#include "qmorse/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmorse/covering.hpp"
#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

constexpr double kEdgeGuard = 1e-12;

JetValue constant_jet(int dim, int order, double v) {
    return extract_jet(TaylorPoly::constant(JetContext::get(dim, order), v));
}

void add_scaled(JetValue& acc, const JetValue& jv, double s) {
    acc.value += s * jv.value;
    for (std::size_t i = 0; i < acc.grad.size(); ++i) acc.grad[i] += s * jv.grad[i];
    for (std::size_t i = 0; i < acc.hess.a.size(); ++i) acc.hess.a[i] += s * jv.hess.a[i];
    for (std::size_t t = 0; t < acc.higher.size(); ++t)
        for (std::size_t i = 0; i < acc.higher[t].data.size(); ++i)
            acc.higher[t].data[i] += s * jv.higher[t].data[i];
}

bool lex_less(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

}  // namespace

double bump_profile(double u) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    double a = std::exp(-1.0 / u);
    double b = std::exp(-1.0 / (1.0 - u));
    return b / (a + b);
}

double bump_value(const Vec& center, double inner_radius, const Vec& x) {
    return bump_profile((vec_dist(x, center) - inner_radius) / inner_radius);
}

JetValue bump_jet(const Vec& center, double inner_radius, const Vec& x, int order) {
    int dim = static_cast<int>(center.size());
    double u0 = (vec_dist(x, center) - inner_radius) / inner_radius;
    if (u0 <= kEdgeGuard) return constant_jet(dim, order, 1.0);
    if (u0 >= 1.0 - kEdgeGuard) return constant_jet(dim, order, 0.0);

    auto ctx = JetContext::get(dim, order);
    TaylorPoly s = TaylorPoly::constant(ctx, 0.0);
    for (int j = 0; j < dim; ++j) {
        TaylorPoly d = TaylorPoly::variable(ctx, j, x[j]) - TaylorPoly::constant(ctx, center[j]);
        s = s + d * d;
    }
    TaylorPoly u =
        scale(jet_sqrt(s), 1.0 / inner_radius) - TaylorPoly::constant(ctx, 1.0);
    // e(u) and e(1-u); underflow to an exact zero near the plateau edges is
    // the correct limit, the guards above only cut off the recip singularity.
    TaylorPoly ea = jet_exp(scale(jet_recip(u), -1.0));
    TaylorPoly eb = jet_exp(scale(jet_recip(TaylorPoly::constant(ctx, 1.0) - u), -1.0));
    return extract_jet(eb * jet_recip(ea + eb));
}

RegularValue select_regular_value(const FunctionSpec& f0, const DerivativeBudget& budget,
                                  const MorseConstants& mc, int grid) {
    if (grid < 8) throw DomainError("grid must be at least 8");
    int n = f0.dim();
    double R = f0.domain_radius();
    double cell = 2.0 * R / (grid - 1);

    RegularValue rv;
    rv.grid_adequate = cell * std::sqrt(static_cast<double>(n)) < mc.psi3;

    // Affine field: the gradient is constant, nothing is near-critical, and
    // any small v is regular. Zero keeps the perturbation trivial.
    if (affine_budget(budget)) {
        rv.v = Vec(n, 0.0);
        return rv;
    }

    auto sigma_min_hess = [&](const Vec& p, Vec* grad_out) {
        JetValue jv = f0.jet(p, 2);
        EigenSym e = jacobi_eigensym(jv.hess);
        double smin = std::numeric_limits<double>::infinity();
        for (double lam : e.values) smin = std::min(smin, std::abs(lam));
        if (grad_out) *grad_out = jv.grad;
        return smin;
    };

    std::vector<Vec> sample;     // gradient values at near-degenerate points
    std::vector<Vec> pts = ball_grid(n, R, grid);
    std::vector<std::pair<double, Vec>> ranked;
    for (const Vec& p : pts) {
        Vec g;
        double smin = sigma_min_hess(p, &g);
        if (smin < mc.gamma) sample.push_back(g);
        ranked.emplace_back(smin, p);
    }

    // Local pattern-search refinement from the most degenerate grid points:
    // the scan alone can miss the bottom of a narrow sigma_min valley.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Vec> seeds;
    for (const auto& [smin, p] : ranked) {
        if (static_cast<int>(seeds.size()) >= 32) break;
        bool crowded = false;
        for (const Vec& s : seeds)
            if (vec_dist(s, p) < 2.0 * cell) {
                crowded = true;
                break;
            }
        if (!crowded) seeds.push_back(p);
    }
    for (const Vec& seed : seeds) {
        Vec cur = seed;
        double cur_val = sigma_min_hess(cur, nullptr);
        double step = cell;
        for (int round = 0; round < 8; ++round) {
            bool moved = true;
            while (moved) {
                moved = false;
                for (int d = 0; d < n; ++d) {
                    for (int sgn : {-1, 1}) {
                        Vec cand = cur;
                        cand[d] += sgn * step;
                        if (vec_norm(cand) > R) continue;
                        double v = sigma_min_hess(cand, nullptr);
                        if (v < cur_val) {
                            cur = cand;
                            cur_val = v;
                            moved = true;
                        }
                    }
                }
            }
            step *= 0.5;
        }
        if (cur_val < mc.gamma) {
            Vec g;
            sigma_min_hess(cur, &g);
            sample.push_back(g);
        }
    }

    rv.sample_size = static_cast<int>(sample.size());
    if (sample.empty()) {
        rv.v = Vec(n, 0.0);
        rv.dist_to_sample = -1.0;
        return rv;
    }

    int res = n <= 2 ? 17 : n == 3 ? 9 : n == 4 ? 7 : n == 5 ? 5 : 3;
    double half = mc.eps / 2.0;
    bool have = false;
    Vec best;
    double best_dist = 0.0, best_norm = 0.0;
    std::vector<int> idx(n, 0);
    while (true) {
        Vec v(n);
        for (int d = 0; d < n; ++d) v[d] = -half + 2.0 * half * idx[d] / (res - 1);
        if (vec_norm(v) < half) {
            double dist = std::numeric_limits<double>::infinity();
            for (const Vec& s : sample) dist = std::min(dist, vec_dist(v, s));
            double vnorm = vec_norm(v);
            bool take = !have || dist > best_dist ||
                        (dist == best_dist &&
                         (vnorm < best_norm || (vnorm == best_norm && lex_less(v, best))));
            if (take) {
                have = true;
                best = v;
                best_dist = dist;
                best_norm = vnorm;
            }
        }
        int d = 0;
        while (d < n && ++idx[d] == res) idx[d++] = 0;
        if (d == n) break;
    }
    if (!have || !(best_dist > 0.0))
        throw Error("no regular value admissible at this resolution; refine the grid");
    rv.v = best;
    rv.dist_to_sample = best_dist;
    return rv;
}

PerturbedField::PerturbedField(std::shared_ptr<const FunctionSpec> base, Perturbation pert)
    : base_(std::move(base)), pert_(std::move(pert)) {}

JetValue PerturbedField::jet(const Vec& x, int order) const {
    JetValue out = base_->jet(x, order);
    out.value -= dot(pert_.v, x);
    if (order >= 1)
        for (int d = 0; d < dim(); ++d) out.grad[d] -= pert_.v[d];
    for (std::size_t i = 0; i < pert_.bump_centers.size(); ++i) {
        double u0 = (vec_dist(x, pert_.bump_centers[i]) - pert_.inner_radius) / pert_.inner_radius;
        if (u0 >= 1.0 - kEdgeGuard) continue;
        if (u0 <= kEdgeGuard) {
            out.value += pert_.bump_coeffs[i];
            continue;
        }
        add_scaled(out, bump_jet(pert_.bump_centers[i], pert_.inner_radius, x, order),
                   pert_.bump_coeffs[i]);
    }
    return out;
}

double PerturbedField::value(const Vec& x) const {
    double out = base_->value(x) - dot(pert_.v, x);
    for (std::size_t i = 0; i < pert_.bump_centers.size(); ++i)
        out += pert_.bump_coeffs[i] * bump_value(pert_.bump_centers[i], pert_.inner_radius, x);
    return out;
}

std::vector<double> PerturbedField::segment_breakpoints(const Vec& base, const Vec& dir) const {
    std::vector<double> cuts;
    double A = dot(dir, dir);
    if (A == 0.0) return cuts;
    for (const Vec& c : pert_.bump_centers) {
        Vec p(base.size());
        for (std::size_t d = 0; d < p.size(); ++d) p[d] = base[d] - c[d];
        for (double rho : {pert_.inner_radius, pert_.outer_radius}) {
            double B = 2.0 * dot(p, dir);
            double C = dot(p, p) - rho * rho;
            double disc = B * B - 4.0 * A * C;
            if (disc <= 0.0) continue;
            double sq = std::sqrt(disc);
            for (double u : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)})
                if (u > 1e-15 && u < 1.0 - 1e-15) cuts.push_back(u);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return b - a < 1e-15; }),
               cuts.end());
    return cuts;
}

PerturbationResult build_perturbation(std::shared_ptr<const FunctionSpec> f0, const Vec& v,
                                      const std::vector<CriticalCertificate>& certs,
                                      const MorseConstants& mc) {
    int n = f0->dim();
    int k = mc.k;
    double eps = mc.eps;
    std::size_t N = certs.size();

    PerturbationResult out;
    out.mc = mc;
    out.pert.v = v;
    out.pert.inner_radius = mc.d_sep / 4.0;
    out.pert.outer_radius = mc.d_sep / 2.0;

    if (N == 0) {
        out.pert.h_ck_norm_estimate = vec_norm(v);
        out.field = std::make_shared<PerturbedField>(std::move(f0), out.pert);
        return out;
    }

    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (vec_dist(certs[i].point, certs[j].point) < mc.d_sep * (1.0 - 1e-12))
                throw DomainError("bump supports overlap: center separation below d_sep");

    // c_i grows with i, so ordering centers by ascending base value turns
    // every value collision into a gap of at least one coefficient unit.
    std::vector<std::pair<double, Vec>> order;
    for (const auto& c : certs)
        order.emplace_back(f0->value(c.point) - dot(v, c.point), c.point);
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return lex_less(a.second, b.second);
    });

    // Measure the scaled bump's derivative norms along a radius; radial
    // symmetry makes one ray representative.
    const int samples = 160;
    std::vector<double> sup(static_cast<std::size_t>(k) + 1, 0.0);
    Vec origin(n, 0.0);
    for (int m = 0; m < samples; ++m) {
        Vec x(n, 0.0);
        x[0] = out.pert.inner_radius * (1.0 + (m + 0.5) / samples);
        JetValue jv = bump_jet(origin, out.pert.inner_radius, x, k);
        for (int j = 1; j <= k; ++j)
            sup[static_cast<std::size_t>(j)] =
                std::max(sup[static_cast<std::size_t>(j)], derivative_norm(jv, j));
    }
    double C1 = 0.0, sum_sup = 0.0;
    for (int j = 1; j <= k; ++j) {
        C1 = std::max(C1, sup[static_cast<std::size_t>(j)]);
        sum_sup += sup[static_cast<std::size_t>(j)];
    }
    if (!(C1 > 0.0)) throw Error("bump derivative measurement degenerated");

    out.mc.C1 = C1;
    out.mc.psi2 = eps / (2.0 * k * C1 * out.mc.N_bound * out.mc.N_bound);

    double unit = eps / (2.0 * C1 * k * static_cast<double>(N) * static_cast<double>(N));
    for (std::size_t i = 0; i < N; ++i) {
        out.pert.bump_centers.push_back(order[i].second);
        out.pert.bump_coeffs.push_back(static_cast<double>(i + 1) * unit);
    }

    double lambda_ck = out.pert.bump_coeffs.back() * sum_sup;
    out.pert.h_ck_norm_estimate = vec_norm(v) + lambda_ck;
    if (lambda_ck > eps / 2.0 || out.pert.h_ck_norm_estimate > eps) {
        std::ostringstream os;
        os << "perturbation C^k budget exceeded: measured " << out.pert.h_ck_norm_estimate
           << " against eps " << eps;
        throw DomainError(os.str());
    }

    out.field = std::make_shared<PerturbedField>(f0, out.pert);

    // The plateau keeps every bump locally constant at its own center, and
    // disjoint supports keep the others at zero there.
    for (const auto& c : certs) {
        JetValue before = f0->jet(c.point, 2);
        JetValue after = out.field->jet(c.point, 2);
        double diff = 0.0;
        for (int d = 0; d < n; ++d)
            diff = std::max(diff, std::abs(after.grad[d] - (before.grad[d] - v[d])));
        for (std::size_t t = 0; t < before.hess.a.size(); ++t)
            diff = std::max(diff, std::abs(after.hess.a[t] - before.hess.a[t]));
        if (diff > 1e-12)
            throw Error("bump perturbation disturbed a critical point's local jet");
    }
    return out;
}

}  // namespace qmorse
