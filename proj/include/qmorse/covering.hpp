#pragma once

#include "qmorse/smallmat.hpp"

namespace qmorse {

// Covering/packing estimate for a finite point cloud.
//   upper: size of an explicit epsilon-covering (min of two constructions)
//   lower: size of a greedy 2-epsilon packing, a lower bound for the true
//          covering number
// centers realize the upper bound; every input point is within epsilon of one
// of them (checked; max_center_dist records the worst case).
struct CoveringEstimate {
    double epsilon = 0.0;
    int upper = 0;
    int lower = 0;
    std::vector<Vec> centers;
    double max_center_dist = 0.0;
};

// Deterministic given input order. Distance comparisons carry a relative
// 1e-12 slack so points exactly epsilon apart on paper count as covered.
CoveringEstimate covering_number(const std::vector<Vec>& points, double epsilon);

// Upper bound for covering the closed unit ball of R^n by balls of radius
// rho: the volumetric bound ceil((1 + 2/rho)^n), improved for n <= 3 by an
// explicit cube-lattice covering. Returned as double because the volumetric
// value overflows integer range for small rho.
double ball_covering_number(int n, double rho);

// The volumetric bound alone.
double ball_covering_volumetric(int n, double rho);

}  // namespace qmorse
