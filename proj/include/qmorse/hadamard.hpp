#pragma once

#include "qmorse/field.hpp"
#include "qmorse/smallmat.hpp"

namespace qmorse {

// Symmetric matrix field B with
//
//   f(x) - f(center) = (x-center)^T B(x) (x-center)
//
// whenever Df(center) = 0, computed as the ray integral
//
//   B(x) = int_0^1 (1-u) Hf(center + u (x-center)) du,
//
// so B(center) = Hf(center)/2. Evaluated by piecewise adaptive
// Gauss-Legendre: each smooth segment (splits from f.segment_breakpoints)
// starts at 8 nodes and doubles until the relative change is <= tol, up to
// max_nodes. Throws QuadratureError when a segment fails to settle.
Mat hadamard_form(const ScalarField& f, const Vec& center, const Vec& x, int max_nodes = 64,
                  double tol = 1e-12);

// Nodes and weights on [-1, 1]; m >= 1. Cached per m.
struct GaussRule {
    Vec nodes;
    Vec weights;
};
const GaussRule& gauss_legendre(int m);

}  // namespace qmorse
