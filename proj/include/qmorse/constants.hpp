#pragma once

namespace qmorse {

// Constant ledger for a quantitative Morse analysis at derivative budget K
// and tolerance eps. All downstream guarantees are phrased in these:
//
//   Rk    = K / (k-1)!
//   r_eps = (1/2) min(eps, (eps / (c^{1/n} Rk^{1/k}))^{k/(k-1)})
//   gamma = Rk^{1/k} r_eps (1 - r_eps^n c Rk^{n/k} / (eps^n r_eps^{n/k}))
//   psi1  = gamma                    Hessian non-degeneracy floor
//   d_sep = gamma^2 / (4 K^2)        critical-point separation
//   N_bound                          covering bound for the count, volumetric
//   psi2  = eps / (2 k C1 N_bound^2) critical-value gap
//   psi3  = gamma / (2 n (K + eps))  chart radius
//   sigma = gamma / 2
//   r_loc = min(sigma/(K+eps), gamma/(sigma n))
//   eta   = r_loc sigma / 2          gradient threshold localizing criticals
//
// N_bound is a count but is held as double: the volumetric value
// (1 + 2/d_sep)^n overflows 64-bit integers for small d_sep.
struct MorseConstants {
    double K = 0.0;
    double eps = 0.0;
    int k = 0;
    int n = 0;
    double Rk = 0.0;
    double r_eps = 0.0;
    double gamma = 0.0;
    double psi1 = 0.0;
    double d_sep = 0.0;
    double N_bound = 0.0;
    double C1 = 0.0;
    double psi2 = 0.0;
    double psi3 = 0.0;
    double sigma = 0.0;
    double r_loc = 0.0;
    double eta = 0.0;
};

// pre: K > 0 (an affine function has no ledger; handle upstream), eps > 0,
// n >= 1, k >= 3, c > 0, C1 > 0. Throws DomainError when the bracket in
// gamma fails to be positive, with a hint to shrink eps or grow c.
MorseConstants compute_constants(double K, double eps, int n, int k, double c, double C1);

}  // namespace qmorse
