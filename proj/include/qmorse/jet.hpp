#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qmorse/smallmat.hpp"

namespace qmorse {

// Monomial table for truncated multivariate Taylor arithmetic in a fixed
// dimension and order. Monomials are enumerated degree by degree
// (graded lexicographic), so coefficient layout is stable across runs.
// Contexts are immutable and shared between polynomials.
class JetContext {
public:
    JetContext(int dim, int order);

    int dim() const { return dim_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(monomials_.size()); }

    const std::vector<int>& monomial(int idx) const { return monomials_[idx]; }
    // Index of a multi-index, or -1 when its degree exceeds the order.
    int index_of(const std::vector<int>& alpha) const;
    // Product table: index of monomial i*j, or -1 on degree overflow.
    int product_index(int i, int j) const {
        return product_[static_cast<std::size_t>(i) * monomials_.size() + j];
    }
    double factorial_of(int idx) const { return factorial_[idx]; }

    static std::shared_ptr<const JetContext> get(int dim, int order);

private:
    std::uint64_t pack(const std::vector<int>& alpha) const;

    int dim_;
    int order_;
    std::vector<std::vector<int>> monomials_;
    std::unordered_map<std::uint64_t, int> lookup_;
    std::vector<int> product_;
    std::vector<double> factorial_;  // alpha! per monomial
};

// Truncated Taylor polynomial around an implicit expansion point. Coefficient
// for multi-index alpha equals D^alpha f / alpha!.
struct TaylorPoly {
    std::shared_ptr<const JetContext> ctx;
    Vec c;

    TaylorPoly() = default;
    explicit TaylorPoly(std::shared_ptr<const JetContext> context)
        : ctx(std::move(context)), c(ctx->size(), 0.0) {}

    static TaylorPoly constant(std::shared_ptr<const JetContext> ctx, double v);
    // Variable i expanded at base point value xi: xi + (x_i - xi).
    static TaylorPoly variable(std::shared_ptr<const JetContext> ctx, int i, double xi);

    double value() const { return c[0]; }
};

TaylorPoly operator+(const TaylorPoly& a, const TaylorPoly& b);
TaylorPoly operator-(const TaylorPoly& a, const TaylorPoly& b);
TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b);
TaylorPoly scale(const TaylorPoly& a, double s);

// Composition with a univariate analytic function given by its Taylor
// coefficients at a.value(): g_j = g^(j)(u0)/j!. Evaluated by Horner in
// (u - u0).
TaylorPoly compose_series(const TaylorPoly& u, const Vec& series);

TaylorPoly jet_exp(const TaylorPoly& u);
TaylorPoly jet_sin(const TaylorPoly& u);
TaylorPoly jet_cos(const TaylorPoly& u);
// Throws DomainError when the constant term is within 1e-14 of zero.
TaylorPoly jet_recip(const TaylorPoly& u);
// Throws DomainError when the constant term is not strictly positive.
TaylorPoly jet_sqrt(const TaylorPoly& u);
// Integer power, negative exponents via reciprocal.
TaylorPoly jet_powi(const TaylorPoly& u, long long p);

// Dense symmetric derivative tensor of a given order, row-major over all
// index tuples. Symmetry holds exactly: permuted entries are copies of the
// same stored coefficient.
struct SymTensor {
    int dim = 0;
    int order = 0;
    std::vector<double> data;  // size dim^order

    double entry(const std::vector<int>& idx) const;
};

// Derivatives of one scalar function at one point, orders 0..order.
struct JetValue {
    int dim = 0;
    int order = 0;
    double value = 0.0;
    Vec grad;                        // present when order >= 1
    Mat hess;                        // present when order >= 2
    std::vector<SymTensor> higher;   // orders 3..order

    const SymTensor& tensor(int j) const { return higher[static_cast<std::size_t>(j) - 3]; }
};

// Unpack a polynomial into derivative tensors (multiplies by alpha!).
JetValue extract_jet(const TaylorPoly& p);

// Norm of the order-j derivative at a point:
//   j = 1: Euclidean norm of the gradient
//   j = 2: spectral norm of the Hessian
//   j >= 3: max |entry| * dim^((j-1)/2)
double derivative_norm(const JetValue& jv, int j);

}  // namespace qmorse
