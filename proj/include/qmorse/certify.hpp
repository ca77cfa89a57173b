#pragma once

#include <vector>

#include "qmorse/field.hpp"
#include "qmorse/maps.hpp"

namespace qmorse {

// Quantitative inverse-function certificate at x0 for a C^1 map R^n -> R^n.
//
//   delta             = sigma_min(Jf(x0)) / 2
//   r                 = delta / hess_lip, clamped into the domain; on this
//                       radius the Jacobian stays within delta of Jf(x0)
//   domain_ball_radius = r * delta / (2 K_lip)
//   image_ball_radius  = r * delta / 2
// The map is invertible from B_domain(x0) onto a set containing
// B_image(f(x0)), with inverse Lipschitz constant 1/delta.
struct InverseCertificate {
    Vec x0;
    double delta = 0.0;
    double K_lip = 0.0;
    double r = 0.0;
    double domain_ball_radius = 0.0;
    double image_ball_radius = 0.0;
    double inv_lipschitz = 0.0;
};

// pre: sigma_min(Jf(x0)) > 1e-10 and ||x0|| < domain radius. hess_lip = 0
// means the Jacobian is constant; r is then just the domain clamp.
InverseCertificate inverse_certificate(const VectorMap& map, const Vec& x0, double K_lip,
                                       double hess_lip);

// Solve map(x) = y by Newton from the certificate center. Throws
// DegenerateError on a singular Jacobian, DomainError if no convergence.
Vec newton_invert(const VectorMap& map, const InverseCertificate& cert, const Vec& y,
                  double tol = 1e-13);

// Isolated critical point of a scalar field with a certified uniqueness ball.
struct CriticalCertificate {
    Vec point;
    double uniqueness_radius = 0.0;
    Vec hess_spectrum;           // descending
    double sigma_min_hess = 0.0;
    int morse_index = 0;         // negative eigenvalue count
    double value = 0.0;
};

// Converged critical point whose Hessian is too close to singular to certify.
struct NearDegenerateReport {
    Vec point;
    double sigma_min_hess = 0.0;
    Vec hess_spectrum;
    double value = 0.0;
};

struct IsolationResult {
    std::vector<CriticalCertificate> certificates;  // lexicographic by point
    std::vector<NearDegenerateReport> near_degenerate;
};

// Newton on Df seeded at grid-local minima of ||Df||. Converged points are
// deduplicated at newton_tol (keeping the smaller ||Df||); survivors with
// sigma_min(Hf) >= psi1_floor become certificates with uniqueness_radius =
// psi1_floor^2/(8 K^2) clamped into the domain, the rest are reported
// near-degenerate. Boundary-sphere points are outside the certified scope and
// are dropped. Diverging seeds are dropped silently; an empty result is valid.
IsolationResult isolate_criticals(const ScalarField& f, const DerivativeBudget& budget,
                                  double psi1_floor, int grid, double newton_tol);

}  // namespace qmorse
