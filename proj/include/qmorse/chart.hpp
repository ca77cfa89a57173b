#pragma once

#include <vector>

#include "qmorse/certify.hpp"
#include "qmorse/congruence.hpp"
#include "qmorse/constants.hpp"
#include "qmorse/field.hpp"

namespace qmorse {

// Normal-form chart phi(x) = Q_x^{-1} (x - center) around a non-degenerate
// critical point, where Q_x reduces the Hadamard form B_x in the congruence
// context of A = Hf(center)/2. On the verified ball,
//   f(x) = f(center) + sum_i D0_i phi_i(x)^2
// up to residual_sup. The nominal radius psi3 shrinks to the largest
// validated shell when some B_x leaves the context neighborhood U(A).
struct MorseChart {
    Vec center;
    double center_value = 0.0;
    double radius = 0.0;          // verified
    double nominal_radius = 0.0;  // psi3
    bool shrunk = false;
    CongruenceReduction ctx;
    int l = 0;                    // +1 count of D0
    double residual_sup = 0.0;
    double residual_tol = 0.0;
    double chart_norm_estimate = 0.0;
};

// Deterministic evaluation grid: 10 concentric shells, 100 directions each
// (1000 points; in dimension one, 500 radii on both sides). Directions are
// the signed axes plus a fixed-seed gaussian fill, identical run to run.
std::vector<Vec> chart_test_grid(int dim, const Vec& center, double radius);

// pre: cert.sigma_min_hess >= mc.psi1 and ||Df(center)|| at Newton tolerance.
// Validates shells inner to outer, measures the residual over the surviving
// grid, and estimates the chart derivative norms (orders 1..min(k-1,3)) by
// finite differences at a few sample points. The estimate is empirical, not
// a certified bound.
MorseChart morse_chart(const ScalarField& f, const CriticalCertificate& cert,
                       const MorseConstants& mc, int max_nodes = 64);

Vec chart_apply(const ScalarField& f, const MorseChart& ch, const Vec& x, int max_nodes = 64);

// |f(x) - f(center) - phi(x)^T D0 phi(x)|
double chart_residual(const ScalarField& f, const MorseChart& ch, const Vec& x,
                      int max_nodes = 64);

}  // namespace qmorse
