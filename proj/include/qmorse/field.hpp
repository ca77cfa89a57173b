#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qmorse/expr.hpp"
#include "qmorse/jet.hpp"

namespace qmorse {

// A C^k scalar function on a closed ball about the origin. Implementations
// must be deterministic: same x, same jet, bit for bit.
class ScalarField {
public:
    virtual ~ScalarField() = default;

    virtual int dim() const = 0;
    virtual int order_limit() const = 0;
    virtual double domain_radius() const = 0;
    virtual JetValue jet(const Vec& x, int order) const = 0;

    virtual double value(const Vec& x) const { return jet(x, 0).value; }

    // Parameters u in [0,1] at which u -> f(base + u*dir) switches between
    // smooth pieces. Quadrature along segments splits at these. Fields built
    // from a single expression are smooth everywhere, hence the empty default.
    virtual std::vector<double> segment_breakpoints(const Vec& base, const Vec& dir) const {
        (void)base;
        (void)dir;
        return {};
    }
};

// Expression-backed field: dimension, smoothness order k, source text, and the
// parsed tree. Loading checks that division nodes stay bounded away from zero
// on a sample grid of the closed ball.
class FunctionSpec final : public ScalarField {
public:
    FunctionSpec(int dim, int k, std::string expr_text, double domain_radius);

    int dim() const override { return dim_; }
    int order_limit() const override { return k_; }
    double domain_radius() const override { return radius_; }
    JetValue jet(const Vec& x, int order) const override;

    const std::string& expr_text() const { return text_; }
    const ExprPtr& tree() const { return tree_; }

private:
    int dim_;
    int k_;
    double radius_;
    std::string text_;
    ExprPtr tree_;
};

// Parse a spec JSON document: {"dim": n, "k": k, "expr": "...",
// "domain_radius": r} with domain_radius optional (default 1). Throws
// ParseError / DomainError on malformed input.
std::shared_ptr<FunctionSpec> load_function_spec_json(const std::string& json_text);
std::shared_ptr<FunctionSpec> load_function_spec_file(const std::string& path);

// Deterministic sample of the closed ball of radius R: the cube lattice
// restricted to the ball, plus radial projections of the outermost cube shell
// onto the sphere so boundary suprema are represented.
std::vector<Vec> ball_grid(int dim, double radius, int resolution);

// Measured derivative suprema over a grid of the domain ball. Entry j of
// per_order_sup is the grid sup of the order-j derivative norm; slot 0 holds
// sup |f| for reporting and is not part of K or ck_norm, which run over
// j = 1..k. Grid estimates are lower bounds of the true suprema.
struct DerivativeBudget {
    double K = 0.0;
    Vec per_order_sup;
    double ck_norm = 0.0;
    int grid_resolution = 0;
};

// pre: grid_resolution >= 8.
DerivativeBudget estimate_budget(const ScalarField& f, int grid_resolution);

// True when every derivative of order >= 2 vanishes on the grid: the function
// is affine and carries no critical structure worth certifying.
bool affine_budget(const DerivativeBudget& budget);

}  // namespace qmorse
