#include "qmorse/maps.hpp"

#include "qmorse/errors.hpp"

namespace qmorse {

ComponentsMap::ComponentsMap(std::vector<std::shared_ptr<const ScalarField>> parts)
    : parts_(std::move(parts)) {
    if (parts_.empty()) throw DomainError("components map needs at least one component");
    for (const auto& p : parts_) {
        if (p->dim() != parts_[0]->dim() || p->domain_radius() != parts_[0]->domain_radius())
            throw DomainError("components must share dimension and domain radius");
    }
}

Vec ComponentsMap::eval(const Vec& x) const {
    Vec y(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) y[i] = parts_[i]->value(x);
    return y;
}

Mat ComponentsMap::jacobian(const Vec& x) const {
    Mat J(image_dim(), domain_dim());
    for (int i = 0; i < image_dim(); ++i) {
        Vec g = parts_[i]->jet(x, 1).grad;
        for (int j = 0; j < domain_dim(); ++j) J(i, j) = g[j];
    }
    return J;
}

}  // namespace qmorse
