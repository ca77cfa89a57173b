#pragma once

#include <memory>
#include <vector>

#include "qmorse/certify.hpp"
#include "qmorse/constants.hpp"
#include "qmorse/field.hpp"

namespace qmorse {

// Radial plateau profile g(u) = e(1-u)/(e(u)+e(1-u)) with e(t) = exp(-1/t):
// identically 1 for u <= 0, identically 0 for u >= 1, smooth throughout.
double bump_profile(double u);

// Full jet at x of the unit bump centered at `center`: 1 on the closed ball
// of inner_radius, 0 outside radius 2*inner_radius, the profile of
// (||x-center|| - inner_radius)/inner_radius in between. Plateau and exterior
// return exact constant jets.
JetValue bump_jet(const Vec& center, double inner_radius, const Vec& x, int order);

double bump_value(const Vec& center, double inner_radius, const Vec& x);

// Regular-value selection result. dist_to_sample is negative when the
// near-critical sample was empty (v = 0 is then returned outright).
struct RegularValue {
    Vec v;
    double dist_to_sample = 0.0;
    int sample_size = 0;
    bool grid_adequate = false;  // cell diameter < psi3
};

// Scans the ball for points where sigma_min(Hess f0) < mc.gamma, collects the
// gradient values there (with deterministic local refinement), and picks v
// with ||v|| < eps/2 maximizing the distance to that sample. Ties prefer
// smaller ||v||, then lexicographic order. Throws when every candidate hits
// the sample (refine the grid).
RegularValue select_regular_value(const FunctionSpec& f0, const DerivativeBudget& budget,
                                  const MorseConstants& mc, int grid);

// The additive perturbation h = h1 + sum_i c_i lambda_i applied to f0:
// Dh1 = -v, and lambda_i is the unit bump at bump_centers[i].
struct Perturbation {
    Vec v;
    std::vector<Vec> bump_centers;   // ascending by base value at the center
    std::vector<double> bump_coeffs; // c_i = i * eps / (2 C1 k N^2)
    double inner_radius = 0.0;       // d_sep / 4
    double outer_radius = 0.0;       // d_sep / 2
    double h_ck_norm_estimate = 0.0; // measured, must be <= eps
};

// f0 - <v,x> + sum_i c_i lambda_i as a ScalarField. Reconstructible from the
// stored Perturbation, which the report serializes.
class PerturbedField final : public ScalarField {
public:
    PerturbedField(std::shared_ptr<const FunctionSpec> base, Perturbation pert);

    int dim() const override { return base_->dim(); }
    int order_limit() const override { return base_->order_limit(); }
    double domain_radius() const override { return base_->domain_radius(); }
    JetValue jet(const Vec& x, int order) const override;
    double value(const Vec& x) const override;
    std::vector<double> segment_breakpoints(const Vec& base, const Vec& dir) const override;

    const FunctionSpec& base() const { return *base_; }
    const Perturbation& perturbation() const { return pert_; }

private:
    std::shared_ptr<const FunctionSpec> base_;
    Perturbation pert_;
};

struct PerturbationResult {
    Perturbation pert;
    std::shared_ptr<PerturbedField> field;
    MorseConstants mc;  // C1 and psi2 refreshed from the measured bumps
};

// pre: certs are the critical points of f0 - <v,x>, pairwise distances
// >= d_sep. Measures the scaled bump derivative norms up to order k, folds
// the measured C1 back into the constants (one fixed-point pass), assigns
// c_i in ascending order of the base value at each center, and checks the
// plateau leaves each Df(x_i), Hf(x_i) untouched.
PerturbationResult build_perturbation(std::shared_ptr<const FunctionSpec> f0, const Vec& v,
                                      const std::vector<CriticalCertificate>& certs,
                                      const MorseConstants& mc);

}  // namespace qmorse
