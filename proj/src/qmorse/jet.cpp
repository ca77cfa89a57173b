#include "qmorse/jet.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

void gen_monomials(int dim, int pos, int remaining, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
    if (pos == dim - 1) {
        cur[pos] = remaining;
        out.push_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        gen_monomials(dim, pos + 1, remaining - v, cur, out);
    }
}

double multi_factorial(const std::vector<int>& alpha) {
    double f = 1.0;
    for (int a : alpha)
        for (int i = 2; i <= a; ++i) f *= i;
    return f;
}

}  // namespace

JetContext::JetContext(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1 || dim > 12) throw DomainError("jet dimension out of range [1,12]");
    if (order < 0 || order > 15) throw DomainError("jet order out of range [0,15]");

    std::vector<int> cur(dim, 0);
    for (int deg = 0; deg <= order; ++deg) gen_monomials(dim, 0, deg, cur, monomials_);

    lookup_.reserve(monomials_.size() * 2);
    factorial_.resize(monomials_.size());
    for (int i = 0; i < size(); ++i) {
        lookup_[pack(monomials_[i])] = i;
        factorial_[i] = multi_factorial(monomials_[i]);
    }

    std::size_t m = monomials_.size();
    product_.assign(m * m, -1);
    std::vector<int> sum(dim);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            int deg = 0;
            for (int d = 0; d < dim; ++d) {
                sum[d] = monomials_[i][d] + monomials_[j][d];
                deg += sum[d];
            }
            if (deg <= order) product_[i * m + j] = lookup_.at(pack(sum));
        }
    }
}

std::uint64_t JetContext::pack(const std::vector<int>& alpha) const {
    std::uint64_t key = 0;
    std::uint64_t base = static_cast<std::uint64_t>(order_) + 1;
    for (int d = 0; d < dim_; ++d) key = key * base + static_cast<std::uint64_t>(alpha[d]);
    return key;
}

int JetContext::index_of(const std::vector<int>& alpha) const {
    int deg = 0;
    for (int a : alpha) deg += a;
    if (deg > order_) return -1;
    auto it = lookup_.find(pack(alpha));
    return it == lookup_.end() ? -1 : it->second;
}

std::shared_ptr<const JetContext> JetContext::get(int dim, int order) {
    static std::map<std::pair<int, int>, std::shared_ptr<const JetContext>> cache;
    auto key = std::make_pair(dim, order);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ctx = std::make_shared<const JetContext>(dim, order);
    cache[key] = ctx;
    return ctx;
}

TaylorPoly TaylorPoly::constant(std::shared_ptr<const JetContext> ctx, double v) {
    TaylorPoly p(std::move(ctx));
    p.c[0] = v;
    return p;
}

TaylorPoly TaylorPoly::variable(std::shared_ptr<const JetContext> ctx, int i, double xi) {
    TaylorPoly p(ctx);
    p.c[0] = xi;
    if (ctx->order() >= 1) {
        std::vector<int> alpha(ctx->dim(), 0);
        alpha[i] = 1;
        p.c[ctx->index_of(alpha)] = 1.0;
    }
    return p;
}

TaylorPoly operator+(const TaylorPoly& a, const TaylorPoly& b) {
    TaylorPoly r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

TaylorPoly operator-(const TaylorPoly& a, const TaylorPoly& b) {
    TaylorPoly r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
}

TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b) {
    TaylorPoly r(a.ctx);
    int m = a.ctx->size();
    for (int i = 0; i < m; ++i) {
        double ai = a.c[i];
        if (ai == 0.0) continue;
        for (int j = 0; j < m; ++j) {
            double bj = b.c[j];
            if (bj == 0.0) continue;
            int k = a.ctx->product_index(i, j);
            if (k >= 0) r.c[k] += ai * bj;
        }
    }
    return r;
}

TaylorPoly scale(const TaylorPoly& a, double s) {
    TaylorPoly r = a;
    for (double& v : r.c) v *= s;
    return r;
}

TaylorPoly compose_series(const TaylorPoly& u, const Vec& series) {
    // w = u - u0 has zero constant term, so w^j kills low-order mixing and
    // Horner over the truncated ring is exact.
    TaylorPoly w = u;
    w.c[0] = 0.0;
    int m = u.ctx->order();
    TaylorPoly r = TaylorPoly::constant(u.ctx, series[m]);
    for (int j = m - 1; j >= 0; --j) {
        r = r * w;
        r.c[0] += series[j];
    }
    return r;
}

TaylorPoly jet_exp(const TaylorPoly& u) {
    int m = u.ctx->order();
    double e = std::exp(u.value());
    Vec s(m + 1);
    double fact = 1.0;
    for (int j = 0; j <= m; ++j) {
        if (j > 0) fact *= j;
        s[j] = e / fact;
    }
    return compose_series(u, s);
}

TaylorPoly jet_sin(const TaylorPoly& u) {
    int m = u.ctx->order();
    double u0 = u.value();
    double sv = std::sin(u0), cv = std::cos(u0);
    // d^j sin cycles sin, cos, -sin, -cos.
    const double cycle[4] = {sv, cv, -sv, -cv};
    Vec s(m + 1);
    double fact = 1.0;
    for (int j = 0; j <= m; ++j) {
        if (j > 0) fact *= j;
        s[j] = cycle[j % 4] / fact;
    }
    return compose_series(u, s);
}

TaylorPoly jet_cos(const TaylorPoly& u) {
    int m = u.ctx->order();
    double u0 = u.value();
    double sv = std::sin(u0), cv = std::cos(u0);
    const double cycle[4] = {cv, -sv, -cv, sv};
    Vec s(m + 1);
    double fact = 1.0;
    for (int j = 0; j <= m; ++j) {
        if (j > 0) fact *= j;
        s[j] = cycle[j % 4] / fact;
    }
    return compose_series(u, s);
}

TaylorPoly jet_recip(const TaylorPoly& u) {
    double u0 = u.value();
    if (std::abs(u0) < 1e-14) throw DomainError("division by zero in jet evaluation");
    int m = u.ctx->order();
    Vec s(m + 1);
    double p = 1.0 / u0;
    for (int j = 0; j <= m; ++j) {
        s[j] = (j % 2 == 0 ? p : -p);
        p /= u0;
    }
    return compose_series(u, s);
}

TaylorPoly jet_sqrt(const TaylorPoly& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw DomainError("sqrt of non-positive value in jet evaluation");
    int m = u.ctx->order();
    // g_j = binom(1/2, j) * u0^(1/2 - j)
    Vec s(m + 1);
    double binom = 1.0;
    double pw = std::sqrt(u0);
    for (int j = 0; j <= m; ++j) {
        s[j] = binom * pw;
        binom *= (0.5 - j) / (j + 1);
        pw /= u0;
    }
    return compose_series(u, s);
}

TaylorPoly jet_powi(const TaylorPoly& u, long long p) {
    if (p < 0) return jet_recip(jet_powi(u, -p));
    TaylorPoly r = TaylorPoly::constant(u.ctx, 1.0);
    TaylorPoly base = u;
    long long e = p;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

double SymTensor::entry(const std::vector<int>& idx) const {
    std::size_t flat = 0;
    for (int i : idx) flat = flat * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
    return data[flat];
}

JetValue extract_jet(const TaylorPoly& p) {
    const JetContext& ctx = *p.ctx;
    int n = ctx.dim();
    int m = ctx.order();

    JetValue jv;
    jv.dim = n;
    jv.order = m;
    jv.value = p.c[0];

    if (m >= 1) {
        jv.grad.assign(n, 0.0);
        std::vector<int> alpha(n, 0);
        for (int i = 0; i < n; ++i) {
            alpha[i] = 1;
            jv.grad[i] = p.c[ctx.index_of(alpha)];
            alpha[i] = 0;
        }
    }
    if (m >= 2) {
        jv.hess = Mat(n, n);
        std::vector<int> alpha(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                alpha[i] += 1;
                alpha[j] += 1;
                int idx = ctx.index_of(alpha);
                double v = ctx.factorial_of(idx) * p.c[idx];
                jv.hess(i, j) = v;
                jv.hess(j, i) = v;
                alpha[i] = 0;
                alpha[j] = 0;
            }
    }
    for (int ord = 3; ord <= m; ++ord) {
        SymTensor t;
        t.dim = n;
        t.order = ord;
        std::size_t total = 1;
        for (int r = 0; r < ord; ++r) total *= static_cast<std::size_t>(n);
        t.data.resize(total);
        std::vector<int> tuple(ord, 0);
        std::vector<int> alpha(n, 0);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            std::fill(alpha.begin(), alpha.end(), 0);
            for (int r = ord - 1; r >= 0; --r) {
                tuple[r] = static_cast<int>(rem % n);
                rem /= n;
                alpha[tuple[r]] += 1;
            }
            int idx = ctx.index_of(alpha);
            t.data[flat] = ctx.factorial_of(idx) * p.c[idx];
        }
        jv.higher.push_back(std::move(t));
    }
    return jv;
}

double derivative_norm(const JetValue& jv, int j) {
    if (j == 0) return std::abs(jv.value);
    if (j == 1) return vec_norm(jv.grad);
    if (j == 2) return spectral_norm_sym(jv.hess);
    const SymTensor& t = jv.tensor(j);
    double m = 0.0;
    for (double v : t.data) m = std::max(m, std::abs(v));
    return m * std::pow(static_cast<double>(jv.dim), (j - 1) / 2.0);
}

}  // namespace qmorse
