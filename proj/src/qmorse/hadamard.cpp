#include "qmorse/hadamard.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "qmorse/errors.hpp"

namespace qmorse {

const GaussRule& gauss_legendre(int m) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[m - 1 - i] = x;
        rule.nodes[i] = -x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[m - 1 - i] = w;
    }
    return cache.emplace(m, std::move(rule)).first->second;
}

namespace {

// int_a^b (1-u) (Hf(center + u dir) - H0) du with an m-node rule. Only the
// correction term is quadratured; the constant part of the integral is exact.
Mat segment_integral(const ScalarField& f, const Vec& center, const Vec& dir, const Mat& H0,
                     double a, double b, int m) {
    int n = static_cast<int>(center.size());
    const GaussRule& rule = gauss_legendre(m);
    Mat acc(n, n);
    double mid = 0.5 * (a + b), halfw = 0.5 * (b - a);
    Vec p(n);
    for (int q = 0; q < m; ++q) {
        double u = mid + halfw * rule.nodes[q];
        for (int d = 0; d < n; ++d) p[d] = center[d] + u * dir[d];
        JetValue jv = f.jet(p, 2);
        double w = rule.weights[q] * halfw * (1.0 - u);
        for (std::size_t t = 0; t < acc.a.size(); ++t) acc.a[t] += w * (jv.hess.a[t] - H0.a[t]);
    }
    return acc;
}

}  // namespace

Mat hadamard_form(const ScalarField& f, const Vec& center, const Vec& x, int max_nodes,
                  double tol) {
    if (max_nodes < 16) throw DomainError("quadrature needs at least 16 nodes to confirm");
    int n = static_cast<int>(center.size());
    Vec dir(n);
    for (int d = 0; d < n; ++d) dir[d] = x[d] - center[d];

    // B = Hf(center)/2 + int_0^1 (1-u) (Hf(center+u dir) - Hf(center)) du.
    // Splitting off the exact constant part keeps B at the bitwise Hessian
    // half whenever the correction vanishes (pure quadratics, x = center).
    Mat H0 = f.jet(center, 2).hess;
    double h0max = max_abs(H0);
    Mat total(n, n);

    std::vector<double> cuts = f.segment_breakpoints(center, dir);
    std::vector<double> edges{0.0};
    for (double c : cuts) edges.push_back(c);
    edges.push_back(1.0);

    bool any_correction = false;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        double a = edges[s], b = edges[s + 1];
        Mat prev = segment_integral(f, center, dir, H0, a, b, 8);
        bool settled = false;
        for (int m = 16; m <= max_nodes; m *= 2) {
            Mat cur = segment_integral(f, center, dir, H0, a, b, m);
            double change = 0.0, scale = 1.0 + h0max;
            for (std::size_t t = 0; t < cur.a.size(); ++t) {
                change = std::max(change, std::abs(cur.a[t] - prev.a[t]));
                scale = std::max(scale, std::abs(cur.a[t]));
            }
            prev = cur;
            if (change <= tol * scale) {
                settled = true;
                break;
            }
        }
        if (!settled) throw QuadratureError("Hadamard quadrature did not settle on a segment");
        for (std::size_t t = 0; t < total.a.size(); ++t) {
            total.a[t] += prev.a[t];
            if (prev.a[t] != 0.0) any_correction = true;
        }
    }

    if (!any_correction) {
        for (std::size_t t = 0; t < H0.a.size(); ++t) total.a[t] = 0.5 * H0.a[t];
        return total;
    }
    for (std::size_t t = 0; t < total.a.size(); ++t) total.a[t] += 0.5 * H0.a[t];
    // Exact symmetry in the output keeps downstream symmetry checks trivial.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = 0.5 * (total(i, j) + total(j, i));
            total(i, j) = v;
            total(j, i) = v;
        }
    return total;
}

}  // namespace qmorse
