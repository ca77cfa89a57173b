#pragma once

#include <cstddef>
#include <vector>

namespace qmorse {

using Vec = std::vector<double>;

// Dense row-major matrix. Sizes here are tiny (n <= ~10), so everything is
// plain loops; determinism matters more than speed.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Mat identity(int n);
};

Mat mat_mul(const Mat& A, const Mat& B);
Vec mat_vec(const Mat& A, const Vec& x);
Mat transpose(const Mat& A);
Mat mat_sub(const Mat& A, const Mat& B);

double vec_norm(const Vec& x);
double vec_dist(const Vec& x, const Vec& y);
double dot(const Vec& x, const Vec& y);

double max_abs(const Mat& A);

// Symmetric eigendecomposition A = V diag(values) V^T by cyclic Jacobi
// rotations. Eigenvalues sorted descending; each eigenvector's first entry of
// magnitude > 1e-12 is made positive so results are reproducible across runs.
struct EigenSym {
    Vec values;   // descending
    Mat vectors;  // columns match values
};

EigenSym jacobi_eigensym(const Mat& A);

// Spectral norm. For symmetric input max |eigenvalue|; general input goes
// through A^T A.
double spectral_norm_sym(const Mat& A);
double spectral_norm(const Mat& A);

// Solve A x = b by LU with partial pivoting. Throws DegenerateError when a
// pivot falls below 1e-14 * max|A|.
Vec solve_lu(const Mat& A, const Vec& b);

}  // namespace qmorse
