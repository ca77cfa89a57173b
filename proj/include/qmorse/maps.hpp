#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qmorse/field.hpp"
#include "qmorse/smallmat.hpp"

namespace qmorse {

// A differentiable map R^n -> R^m on a closed ball about the origin.
class VectorMap {
public:
    virtual ~VectorMap() = default;

    virtual int domain_dim() const = 0;
    virtual int image_dim() const = 0;
    virtual double domain_radius() const = 0;
    virtual Vec eval(const Vec& x) const = 0;
    virtual Mat jacobian(const Vec& x) const = 0;
};

// The gradient of a scalar field as a map R^n -> R^n; its Jacobian is the
// Hessian of the field.
class GradientMap final : public VectorMap {
public:
    explicit GradientMap(std::shared_ptr<const ScalarField> f) : f_(std::move(f)) {}

    int domain_dim() const override { return f_->dim(); }
    int image_dim() const override { return f_->dim(); }
    double domain_radius() const override { return f_->domain_radius(); }
    Vec eval(const Vec& x) const override { return f_->jet(x, 1).grad; }
    Mat jacobian(const Vec& x) const override { return f_->jet(x, 2).hess; }

    const ScalarField& field() const { return *f_; }

private:
    std::shared_ptr<const ScalarField> f_;
};

// Map assembled from m scalar components sharing dimension and domain.
class ComponentsMap final : public VectorMap {
public:
    explicit ComponentsMap(std::vector<std::shared_ptr<const ScalarField>> parts);

    int domain_dim() const override { return parts_[0]->dim(); }
    int image_dim() const override { return static_cast<int>(parts_.size()); }
    double domain_radius() const override { return parts_[0]->domain_radius(); }
    Vec eval(const Vec& x) const override;
    Mat jacobian(const Vec& x) const override;

private:
    std::vector<std::shared_ptr<const ScalarField>> parts_;
};

// Closure-backed map for tests and synthetic corpora.
class CallbackMap final : public VectorMap {
public:
    CallbackMap(int n, int m, double radius, std::function<Vec(const Vec&)> f,
                std::function<Mat(const Vec&)> jac)
        : n_(n), m_(m), radius_(radius), f_(std::move(f)), jac_(std::move(jac)) {}

    int domain_dim() const override { return n_; }
    int image_dim() const override { return m_; }
    double domain_radius() const override { return radius_; }
    Vec eval(const Vec& x) const override { return f_(x); }
    Mat jacobian(const Vec& x) const override { return jac_(x); }

private:
    int n_;
    int m_;
    double radius_;
    std::function<Vec(const Vec&)> f_;
    std::function<Mat(const Vec&)> jac_;
};

}  // namespace qmorse
