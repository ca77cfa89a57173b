#include "qmorse/sard.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "qmorse/congruence.hpp"
#include "qmorse/covering.hpp"
#include "qmorse/errors.hpp"
#include "qmorse/field.hpp"

namespace qmorse {

LambdaProfile::LambdaProfile(Vec ls) : lambdas(std::move(ls)) {
    if (lambdas.empty()) throw DomainError("lambda profile must be nonempty");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] < 0.0) throw DomainError("lambda profile entries must be non-negative");
        if (i > 0 && lambdas[i] > lambdas[i - 1])
            throw DomainError("lambda profile must be non-increasing");
    }
}

SardParameters::SardParameters(int n_, int m_, int k_, double r_, double K_lip_, double c_,
                               double delta_)
    : n(n_), m(m_), k(k_), r(r_), K_lip(K_lip_), c(c_), delta(delta_) {
    if (n < 1 || m < 1 || k < 1) throw DomainError("sard parameters need n, m, k >= 1");
    if (!(r > 0.0) || !(c > 0.0) || !(delta > 0.0))
        throw DomainError("sard parameters r, c, delta must be positive");
    if (K_lip < 0.0) throw DomainError("Lipschitz constant must be non-negative");
    double fact = 1.0;
    for (int i = 2; i <= k - 1; ++i) fact *= i;
    Rk = K_lip * std::pow(r, k - 1) / fact;
}

std::vector<Vec> lambda_critical_points(const VectorMap& f, const LambdaProfile& L, int grid) {
    int q = std::min(f.domain_dim(), f.image_dim());
    if (L.q() != q) throw DomainError("lambda profile length must equal min(n, m)");
    std::vector<Vec> out;
    for (const Vec& x : ball_grid(f.domain_dim(), f.domain_radius(), grid)) {
        SingularSpectrum s = singular_values(f.jacobian(x));
        bool near_critical = true;
        for (int i = 1; i <= q; ++i)
            if (s.sigma[i] > L.lambdas[i - 1]) {
                near_critical = false;
                break;
            }
        if (near_critical) out.push_back(x);
    }
    return out;
}

double sard_bound(const SardParameters& p, const LambdaProfile& L, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (epsilon > p.delta) throw DomainError("epsilon must not exceed delta");
    if (p.Rk == 0.0) return 0.0;  // top derivative is constant; no near-critical mass

    int q = std::min(p.n, p.m);
    if (L.q() != q) throw DomainError("lambda profile length must equal min(n, m)");

    double lead = p.c * std::pow(p.Rk / epsilon, static_cast<double>(p.n) / p.k);
    double sum = 0.0;
    double lambda_prod = 1.0;  // lambda_0 = 1 convention
    for (int i = 0; i <= q; ++i) {
        if (i >= 1) lambda_prod *= L.lambdas[i - 1];
        double a = lambda_prod * std::pow(p.r / epsilon, i) *
                   std::pow(epsilon / p.Rk, static_cast<double>(i) / p.k);
        double b = std::pow(p.delta / epsilon, i);
        sum += std::min(a, b);
    }
    return lead * sum;
}

std::vector<SardRow> sard_compare(const VectorMap& f, const LambdaProfile& L,
                                  const SardParameters& p, const std::vector<double>& epsilons,
                                  int grid) {
    for (double e : epsilons)
        if (e > p.delta) throw DomainError("every epsilon must be at most delta");

    std::vector<Vec> sigma_pts = lambda_critical_points(f, L, grid);
    std::vector<Vec> delta_sample;
    for (const Vec& x : sigma_pts) {
        Vec y = f.eval(x);
        if (vec_norm(y) <= p.delta * (1.0 + 1e-12)) delta_sample.push_back(y);
    }

    std::vector<SardRow> rows;
    for (double e : epsilons) {
        SardRow row;
        row.epsilon = e;
        row.bound = sard_bound(p, L, e);
        row.empirical_upper = delta_sample.empty() ? 0 : covering_number(delta_sample, e).upper;
        if (row.empirical_upper == 0)
            row.ratio = 0.0;
        else
            row.ratio = row.bound > 0.0 ? row.empirical_upper / row.bound
                                        : std::numeric_limits<double>::infinity();
        row.c_too_small = row.empirical_upper > row.bound;
        rows.push_back(row);
    }
    return rows;
}

std::string sard_table_csv(const std::vector<SardRow>& rows) {
    std::string out = "epsilon,empirical_upper,bound,ratio\n";
    char buf[160];
    for (const SardRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g\n", r.epsilon, r.empirical_upper,
                      r.bound, r.ratio);
        out += buf;
    }
    return out;
}

}  // namespace qmorse
