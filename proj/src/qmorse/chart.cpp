#include "qmorse/chart.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qmorse/errors.hpp"
#include "qmorse/hadamard.hpp"

namespace qmorse {

std::vector<Vec> chart_test_grid(int dim, const Vec& center, double radius) {
    std::vector<Vec> pts;
    if (dim == 1) {
        for (int j = 1; j <= 500; ++j) {
            double r = radius * j / 500.0;
            pts.push_back({center[0] + r});
            pts.push_back({center[0] - r});
        }
        return pts;
    }
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int shell = 1; shell <= 10; ++shell) {
        double r = radius * shell / 10.0;
        std::vector<Vec> dirs;
        for (int d = 0; d < dim; ++d)
            for (int sgn : {-1, 1}) {
                Vec e(dim, 0.0);
                e[d] = sgn;
                dirs.push_back(e);
            }
        while (static_cast<int>(dirs.size()) < 100) {
            Vec g(dim);
            double norm = 0.0;
            for (int d = 0; d < dim; ++d) {
                g[d] = gauss(rng);
                norm += g[d] * g[d];
            }
            norm = std::sqrt(norm);
            if (norm < 1e-6) continue;
            for (int d = 0; d < dim; ++d) g[d] /= norm;
            dirs.push_back(g);
        }
        for (const Vec& dir : dirs) {
            Vec p(dim);
            for (int d = 0; d < dim; ++d) p[d] = center[d] + r * dir[d];
            pts.push_back(p);
        }
    }
    return pts;
}

Vec chart_apply(const ScalarField& f, const MorseChart& ch, const Vec& x, int max_nodes) {
    Mat Q = congruence_reduce(ch.ctx, hadamard_form(f, ch.center, x, max_nodes));
    Vec rhs(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) rhs[d] = x[d] - ch.center[d];
    return solve_lu(Q, rhs);
}

double chart_residual(const ScalarField& f, const MorseChart& ch, const Vec& x, int max_nodes) {
    Vec y = chart_apply(f, ch, x, max_nodes);
    double quad = 0.0;
    for (std::size_t d = 0; d < y.size(); ++d) quad += ch.ctx.D0[d] * y[d] * y[d];
    return std::abs(f.value(x) - ch.center_value - quad);
}

namespace {

// Nested central difference of phi component values along the given axes.
Vec phi_diff(const ScalarField& f, const MorseChart& ch, int max_nodes, Vec x,
             const std::vector<int>& axes, std::size_t depth, double h) {
    if (depth == axes.size()) return chart_apply(f, ch, x, max_nodes);
    int a = axes[depth];
    Vec xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    Vec plus = phi_diff(f, ch, max_nodes, xp, axes, depth + 1, h);
    Vec minus = phi_diff(f, ch, max_nodes, xm, axes, depth + 1, h);
    for (std::size_t d = 0; d < plus.size(); ++d) plus[d] = (plus[d] - minus[d]) / (2.0 * h);
    return plus;
}

double chart_norm_at(const ScalarField& f, const MorseChart& ch, int max_nodes, const Vec& x,
                     int order, double h) {
    int n = static_cast<int>(x.size());
    if (order == 1) {
        Mat J(n, n);
        for (int d = 0; d < n; ++d) {
            Vec col = phi_diff(f, ch, max_nodes, x, {d}, 0, h);
            for (int r = 0; r < n; ++r) J(r, d) = col[r];
        }
        return spectral_norm(J);
    }
    // Higher orders: max entry over all index tuples and components, scaled
    // by the same dimensional factor the jet norms use.
    std::vector<int> axes(order, 0);
    double maxent = 0.0;
    while (true) {
        Vec t = phi_diff(f, ch, max_nodes, x, axes, 0, h);
        for (double v : t) maxent = std::max(maxent, std::abs(v));
        int d = 0;
        while (d < order && ++axes[d] == n) axes[d++] = 0;
        if (d == order) break;
    }
    return maxent * std::pow(static_cast<double>(n), (order - 1) / 2.0);
}

}  // namespace

MorseChart morse_chart(const ScalarField& f, const CriticalCertificate& cert,
                       const MorseConstants& mc, int max_nodes) {
    if (!(cert.sigma_min_hess >= mc.psi1))
        throw DomainError("certificate below the psi1 floor cannot be charted");
    int n = f.dim();

    MorseChart ch;
    ch.center = cert.point;
    ch.center_value = f.value(cert.point);
    ch.nominal_radius = mc.psi3;
    ch.residual_tol = 1e-8 * (1.0 + mc.K);

    JetValue jv = f.jet(cert.point, 2);
    Mat A = jv.hess;
    for (double& a : A.a) a *= 0.5;
    ch.ctx = normalizer(A);
    ch.l = ch.ctx.l;

    // Validate shells from the inside out; the chart radius is the largest
    // prefix of shells on which every B_x stays reducible in the context.
    std::vector<Vec> grid = chart_test_grid(n, cert.point, mc.psi3);
    std::size_t per_shell = grid.size() / 10;
    int good_shells = 0;
    std::vector<Vec> verified;
    for (int shell = 0; shell < 10; ++shell) {
        bool ok = true;
        std::vector<Vec> shell_pts(grid.begin() + shell * per_shell,
                                   grid.begin() + (shell + 1) * per_shell);
        for (const Vec& p : shell_pts) {
            try {
                congruence_reduce(ch.ctx, hadamard_form(f, cert.point, p, max_nodes));
            } catch (const DomainError&) {
                ok = false;
                break;
            } catch (const DegenerateError&) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
        ++good_shells;
        verified.insert(verified.end(), shell_pts.begin(), shell_pts.end());
    }
    ch.radius = good_shells == 10 ? mc.psi3 : mc.psi3 * good_shells / 10.0;
    ch.shrunk = good_shells < 10;

    for (const Vec& p : verified)
        ch.residual_sup = std::max(ch.residual_sup, chart_residual(f, ch, p, max_nodes));

    if (ch.radius > 0.0) {
        int top = std::min(mc.k - 1, 3);
        double h = ch.radius / 16.0;
        std::vector<Vec> samples{cert.point};
        for (int d = 0; d < n; ++d)
            for (int sgn : {-1, 1}) {
                Vec p = cert.point;
                p[d] += sgn * ch.radius / 2.0;
                samples.push_back(p);
            }
        for (int order = 1; order <= top; ++order) {
            double worst = 0.0;
            for (const Vec& p : samples)
                worst = std::max(worst, chart_norm_at(f, ch, max_nodes, p, order, h));
            ch.chart_norm_estimate += worst;
        }
    }
    return ch;
}

}  // namespace qmorse
