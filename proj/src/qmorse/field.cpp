#include "qmorse/field.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmorse/errors.hpp"

namespace qmorse {

FunctionSpec::FunctionSpec(int dim, int k, std::string expr_text, double domain_radius)
    : dim_(dim), k_(k), radius_(domain_radius), text_(std::move(expr_text)) {
    if (dim < 1 || dim > 8) throw DomainError("dim out of supported range [1,8]");
    if (k < 3 || k > 10) throw DomainError("smoothness order k out of range [3,10]");
    if (!(domain_radius > 0.0) || !std::isfinite(domain_radius))
        throw DomainError("domain_radius must be positive and finite");
    tree_ = parse_expression(text_, dim_);

    // Domain check: denominators must stay away from zero on the closed ball.
    // Grid sampling only; a pathological denominator can still slip through
    // and will surface as a DomainError during evaluation.
    int res = dim_ <= 2 ? 17 : (dim_ == 3 ? 11 : 7);
    for (const Vec& x : ball_grid(dim_, radius_, res)) {
        eval_expr_double(*tree_, x, 1e-9);
    }
}

JetValue FunctionSpec::jet(const Vec& x, int order) const {
    if (static_cast<int>(x.size()) != dim_) throw DomainError("point dimension mismatch");
    if (order < 0 || order > k_) throw DomainError("jet order outside [0,k]");
    if (vec_norm(x) > radius_ + 1e-12) throw DomainError("point outside the domain ball");
    auto ctx = JetContext::get(dim_, order);
    std::vector<TaylorPoly> vars;
    vars.reserve(dim_);
    for (int i = 0; i < dim_; ++i) vars.push_back(TaylorPoly::variable(ctx, i, x[i]));
    return extract_jet(eval_expr(*tree_, vars));
}

std::shared_ptr<FunctionSpec> load_function_spec_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid spec JSON: ") + e.what(), 0);
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("k") || !j.contains("expr"))
        throw DomainError("spec JSON must contain dim, k and expr");
    if (!j["dim"].is_number_integer() || !j["k"].is_number_integer() || !j["expr"].is_string())
        throw DomainError("spec JSON field types: dim int, k int, expr string");
    double radius = 1.0;
    if (j.contains("domain_radius")) {
        if (!j["domain_radius"].is_number()) throw DomainError("domain_radius must be a number");
        radius = j["domain_radius"].get<double>();
    }
    return std::make_shared<FunctionSpec>(j["dim"].get<int>(), j["k"].get<int>(),
                                          j["expr"].get<std::string>(), radius);
}

std::shared_ptr<FunctionSpec> load_function_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_function_spec_json(ss.str());
}

std::vector<Vec> ball_grid(int dim, double radius, int resolution) {
    if (resolution < 2) throw DomainError("grid resolution must be at least 2");
    std::vector<Vec> pts;
    std::vector<int> idx(dim, 0);
    Vec x(dim);
    const double in_tol = radius * (1.0 + 1e-12);
    while (true) {
        bool on_shell = false;
        for (int d = 0; d < dim; ++d) {
            x[d] = -radius + 2.0 * radius * idx[d] / (resolution - 1);
            if (idx[d] == 0 || idx[d] == resolution - 1) on_shell = true;
        }
        double r = vec_norm(x);
        if (r <= in_tol) pts.push_back(x);
        if (on_shell && r > 1e-12) {
            // Project the outer cube shell to the sphere so the boundary is
            // always sampled.
            Vec s(dim);
            for (int d = 0; d < dim; ++d) s[d] = x[d] * radius / r;
            pts.push_back(s);
        }
        int d = 0;
        while (d < dim && ++idx[d] == resolution) {
            idx[d] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    return pts;
}

DerivativeBudget estimate_budget(const ScalarField& f, int grid_resolution) {
    if (grid_resolution < 8) throw DomainError("budget grid resolution must be at least 8");
    int k = f.order_limit();
    DerivativeBudget b;
    b.grid_resolution = grid_resolution;
    b.per_order_sup.assign(k + 1, 0.0);
    for (const Vec& x : ball_grid(f.dim(), f.domain_radius(), grid_resolution)) {
        JetValue jv = f.jet(x, k);
        for (int j = 0; j <= k; ++j)
            b.per_order_sup[j] = std::max(b.per_order_sup[j], derivative_norm(jv, j));
    }
    for (int j = 1; j <= k; ++j) {
        b.K = std::max(b.K, b.per_order_sup[j]);
        b.ck_norm += b.per_order_sup[j];
    }
    return b;
}

bool affine_budget(const DerivativeBudget& budget) {
    for (size_t j = 2; j < budget.per_order_sup.size(); ++j)
        if (budget.per_order_sup[j] > 1e-14) return false;
    return true;
}

}  // namespace qmorse
