#include "qmorse/congruence.hpp"

#include <cmath>

#include "qmorse/errors.hpp"

namespace qmorse {

SingularSpectrum singular_values(const Mat& M) {
    // Through the Gram matrix; fine at these sizes and conditioning.
    Mat G = mat_mul(transpose(M), M);
    EigenSym e = jacobi_eigensym(G);
    int m = M.rows;
    int q = std::min(M.rows, M.cols);

    SingularSpectrum s;
    s.sigma.assign(m + 1, 0.0);
    s.sigma[0] = 1.0;
    for (int i = 0; i < q && i < m; ++i)
        s.sigma[i + 1] = std::sqrt(std::max(0.0, e.values[i]));
    s.sigma_max = q > 0 ? s.sigma[1] : 0.0;
    // min over the unit sphere of the domain: smallest Gram eigenvalue,
    // which is 0 automatically when m < n.
    s.sigma_min = std::sqrt(std::max(0.0, e.values[M.cols - 1]));
    return s;
}

CongruenceReduction normalizer(const Mat& A) {
    int n = A.rows;
    EigenSym e = jacobi_eigensym(A);
    double scale = 1.0 + max_abs(A);
    double sigma_min = std::abs(e.values[0]);
    for (double v : e.values) sigma_min = std::min(sigma_min, std::abs(v));
    if (sigma_min < 1e-10 * scale)
        throw DegenerateError("matrix is numerically degenerate; cannot normalize");

    CongruenceReduction ctx;
    ctx.A = A;
    ctx.Q0 = Mat(n, n);
    ctx.D0.resize(n);
    for (int j = 0; j < n; ++j) {
        double lam = e.values[j];
        ctx.D0[j] = lam > 0.0 ? 1.0 : -1.0;
        if (lam > 0.0) ctx.l += 1;
        double inv_root = 1.0 / std::sqrt(std::abs(lam));
        for (int i = 0; i < n; ++i) ctx.Q0(i, j) = e.vectors(i, j) * inv_root;
    }
    ctx.radius = sigma_min / (2.0 * n);
    return ctx;
}

Mat congruence_reduce(const CongruenceReduction& ctx, const Mat& B) {
    int n = ctx.A.rows;
    if (B.rows != n || B.cols != n) throw DomainError("matrix size mismatch in reduction");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(B(i, j) - B(j, i)) > 1e-9 * (1.0 + max_abs(B)))
                throw DomainError("matrix is not symmetric");

    if (B.a == ctx.A.a) return ctx.Q0;  // the map fixes its anchor exactly

    double dist = spectral_norm_sym(mat_sub(B, ctx.A));
    if (dist > ctx.radius * (1.0 + 1e-9))
        throw DomainError("matrix outside the congruence radius of the anchor");

    Mat G = mat_mul(transpose(ctx.Q0), mat_mul(B, ctx.Q0));
    // Symmetrize to kill roundoff asymmetry before factoring.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = 0.5 * (G(i, j) + G(j, i));
            G(i, j) = v;
            G(j, i) = v;
        }

    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) off += std::abs(G(i, j));
        if (std::abs(G(i, i)) <= off)
            throw DomainError("normalized matrix lost diagonal dominance");
    }

    // Root-free Cholesky G = L D L^T, unit lower L. Diagonal dominance with
    // diagonal signs matching D0 makes this stable without pivoting.
    Mat L = Mat::identity(n);
    Vec d(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double dj = G(j, j);
        for (int s = 0; s < j; ++s) dj -= L(j, s) * L(j, s) * d[s];
        if (std::abs(dj) < 1e-300) throw DegenerateError("zero pivot in LDL factorization");
        d[j] = dj;
        for (int i = j + 1; i < n; ++i) {
            double v = G(i, j);
            for (int s = 0; s < j; ++s) v -= L(i, s) * L(j, s) * d[s];
            L(i, j) = v / dj;
        }
    }
    for (int j = 0; j < n; ++j)
        if ((d[j] > 0.0 ? 1.0 : -1.0) != ctx.D0[j])
            throw DomainError("inertia changed inside the congruence ball");

    // Q = Q0 L^{-T} |D|^{-1/2}; columns by back substitution on L^T.
    Mat X(n, n);
    for (int col = 0; col < n; ++col) {
        Vec x(n, 0.0);
        x[col] = 1.0 / std::sqrt(std::abs(d[col]));
        for (int i = col - 1; i >= 0; --i) {
            double s = 0.0;
            for (int j = i + 1; j <= col; ++j) s += L(j, i) * x[j];
            x[i] = -s;
        }
        for (int i = 0; i < n; ++i) X(i, col) = x[i];
    }
    return mat_mul(ctx.Q0, X);
}

}  // namespace qmorse
