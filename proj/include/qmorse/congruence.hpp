#pragma once

#include "qmorse/smallmat.hpp"

namespace qmorse {

// Singular values of an m x n matrix. sigma[0] = 1 by convention; sigma[1..m]
// are the singular values in non-increasing order, zero-padded past the rank.
// sigma_min is the minimum of ||Mx|| over the unit sphere of the domain (0
// when m < n).
struct SingularSpectrum {
    Vec sigma;
    double sigma_max = 0.0;
    double sigma_min = 0.0;
};

SingularSpectrum singular_values(const Mat& M);

// Reduction data at a nondegenerate symmetric anchor A.
//
// Q0 diagonalizes A by congruence: Q0^T A Q0 = D0 = diag(+1 x l, -1 x (n-l)),
// built as V |Lambda|^(-1/2) from the spectral decomposition with eigenvalues
// descending, so the positive block comes first without extra permutation.
// ||Q0||^2 = 1/sigma_min(A), hence radius = 1/(2n||Q0||^2) = sigma_min(A)/(2n):
// every symmetric B with ||B - A||_op <= radius reduces to the same D0.
struct CongruenceReduction {
    Mat A;
    Mat Q0;
    Vec D0;      // +-1 diagonal entries
    int l = 0;   // count of +1 entries
    double radius = 0.0;
};

// Throws DegenerateError when some |eigenvalue| < 1e-10 * (1 + ||A||).
CongruenceReduction normalizer(const Mat& A);

// Reduce one nearby symmetric B: returns Q with Q^T B Q = D0 and
// congruence_reduce(ctx, A) = Q0 exactly. Internally G = Q0^T B Q0 is
// strictly diagonally dominant, its root-free Cholesky G = L D L^T needs no
// pivoting, and Q = Q0 L^{-T} |D|^{-1/2}. Throws DomainError when B is
// outside the guaranteed ball or the dominance check fails.
Mat congruence_reduce(const CongruenceReduction& ctx, const Mat& B);

}  // namespace qmorse
