#pragma once

#include <string>
#include <vector>

#include "qmorse/maps.hpp"
#include "qmorse/smallmat.hpp"

namespace qmorse {

// Threshold profile for near-critical points: lambdas[0] is lambda_1, the
// list is non-increasing and non-negative. The product convention lambda_0 = 1
// lives inside sard_bound.
struct LambdaProfile {
    Vec lambdas;

    explicit LambdaProfile(Vec ls);
    int q() const { return static_cast<int>(lambdas.size()); }
};

// Inputs of the near-critical entropy bound for a C^k map on a radius-r ball.
// K_lip is a Lipschitz constant of D^(k-1) of the map. c is the universal
// constant of the bound, unknown in general, configurable, default 1.
struct SardParameters {
    int n = 0;
    int m = 0;
    int k = 0;
    double r = 0.0;
    double K_lip = 0.0;
    double Rk = 0.0;     // K_lip * r^(k-1) / (k-1)!
    double c = 1.0;
    double delta = 0.0;  // radius of the value ball

    SardParameters(int n, int m, int k, double r, double K_lip, double c, double delta);
};

// Grid discretization of the near-critical set: all grid points x of the
// closed ball with sigma_i(Df(x)) <= lambda_i for i = 1..q, q = min(n, m).
std::vector<Vec> lambda_critical_points(const VectorMap& f, const LambdaProfile& L, int grid);

// Evaluates the entropy bound
//   c * (Rk/eps)^(n/k) * sum_{i=0}^{q} min(l_0...l_i * (r/eps)^i * (eps/Rk)^(i/k),
//                                          (delta/eps)^i)
// with l_0 = 1. Rk = 0 (top derivative constant) returns 0 for eps > 0.
// Throws DomainError unless 0 < eps <= delta.
double sard_bound(const SardParameters& p, const LambdaProfile& L, double epsilon);

// One row of the empirical-versus-bound table.
struct SardRow {
    double epsilon = 0.0;
    int empirical_upper = 0;
    double bound = 0.0;
    double ratio = 0.0;
    bool c_too_small = false;  // empirical exceeded the bound
};

// Samples the near-critical value set Delta = f(Sigma) once on the given grid,
// intersects with the closed delta-ball of the image, and covers it at each
// epsilon. ratio = empirical/bound (0 when both vanish).
std::vector<SardRow> sard_compare(const VectorMap& f, const LambdaProfile& L,
                                  const SardParameters& p, const std::vector<double>& epsilons,
                                  int grid);

// CSV serialization: header + one row per epsilon.
std::string sard_table_csv(const std::vector<SardRow>& rows);

}  // namespace qmorse
