#include "qmorse/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmorse/errors.hpp"

namespace qmorse {

Mat Mat::identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Mat mat_mul(const Mat& A, const Mat& B) {
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            double aik = A(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

Vec mat_vec(const Mat& A, const Vec& x) {
    Vec y(A.rows, 0.0);
    for (int i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

Mat mat_sub(const Mat& A, const Mat& B) {
    Mat C(A.rows, A.cols);
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = A.a[i] - B.a[i];
    return C;
}

double vec_norm(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double vec_dist(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double max_abs(const Mat& A) {
    double m = 0.0;
    for (double v : A.a) m = std::max(m, std::abs(v));
    return m;
}

EigenSym jacobi_eigensym(const Mat& A) {
    int n = A.rows;
    Mat S = A;
    Mat V = Mat::identity(n);

    // Cyclic sweeps over the upper triangle; rotation order is fixed, so the
    // result is deterministic for a given input.
    const int max_sweeps = 64;
    const double off_tol = 1e-12;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(S(p, q)));
        if (off <= off_tol * (1.0 + max_abs(S))) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = S(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                double theta = (S(q, q) - S(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double sip = S(i, p), siq = S(i, q);
                    S(i, p) = c * sip - s * siq;
                    S(i, q) = s * sip + c * siq;
                }
                for (int i = 0; i < n; ++i) {
                    double spi = S(p, i), sqi = S(q, i);
                    S(p, i) = c * spi - s * sqi;
                    S(q, i) = s * spi + c * sqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    // Sort descending; ties keep the lower original index first.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return S(i, i) > S(j, j); });

    EigenSym out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int k = 0; k < n; ++k) {
        int src = order[k];
        out.values[k] = S(src, src);
        // Sign fix: first entry with |v| > 1e-12 is made positive.
        double sign = 1.0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(V(i, src)) > 1e-12) {
                sign = V(i, src) > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (int i = 0; i < n; ++i) out.vectors(i, k) = sign * V(i, src);
    }
    return out;
}

double spectral_norm_sym(const Mat& A) {
    EigenSym e = jacobi_eigensym(A);
    double m = 0.0;
    for (double v : e.values) m = std::max(m, std::abs(v));
    return m;
}

double spectral_norm(const Mat& A) {
    Mat G = mat_mul(transpose(A), A);
    EigenSym e = jacobi_eigensym(G);
    double m = 0.0;
    for (double v : e.values) m = std::max(m, v);
    return std::sqrt(std::max(0.0, m));
}

Vec solve_lu(const Mat& A, const Vec& b) {
    int n = A.rows;
    Mat U = A;
    Vec y = b;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double scale = max_abs(A);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::abs(U(i, col)) > std::abs(U(piv, col))) piv = i;
        if (std::abs(U(piv, col)) < 1e-14 * (scale + 1.0))
            throw DegenerateError("singular matrix in linear solve");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(U(col, j), U(piv, j));
            std::swap(y[col], y[piv]);
        }
        for (int i = col + 1; i < n; ++i) {
            double f = U(i, col) / U(col, col);
            U(i, col) = 0.0;
            for (int j = col + 1; j < n; ++j) U(i, j) -= f * U(col, j);
            y[i] -= f * y[col];
        }
    }
    Vec x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < n; ++j) s -= U(i, j) * x[j];
        x[i] = s / U(i, i);
    }
    return x;
}

}  // namespace qmorse
