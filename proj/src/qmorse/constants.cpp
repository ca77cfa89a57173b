#include "qmorse/constants.hpp"

#include <algorithm>
#include <cmath>

#include "qmorse/covering.hpp"
#include "qmorse/errors.hpp"

namespace qmorse {

MorseConstants compute_constants(double K, double eps, int n, int k, double c, double C1) {
    if (!(K > 0.0)) throw DomainError("K must be positive; an affine function has no ledger");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    if (n < 1) throw DomainError("n must be at least 1");
    if (k < 3) throw DomainError("k must be at least 3");
    if (!(c > 0.0)) throw DomainError("c must be positive");
    if (!(C1 > 0.0)) throw DomainError("C1 must be positive");

    MorseConstants mc;
    mc.K = K;
    mc.eps = eps;
    mc.k = k;
    mc.n = n;
    mc.C1 = C1;

    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;
    mc.Rk = K / fact;

    double nd = static_cast<double>(n);
    double kd = static_cast<double>(k);
    double alt = std::pow(eps / (std::pow(c, 1.0 / nd) * std::pow(mc.Rk, 1.0 / kd)),
                          kd / (kd - 1.0));
    mc.r_eps = 0.5 * std::min(eps, alt);

    double bracket = 1.0 - (std::pow(mc.r_eps, nd) * c * std::pow(mc.Rk, nd / kd)) /
                               (std::pow(eps, nd) * std::pow(mc.r_eps, nd / kd));
    mc.gamma = std::pow(mc.Rk, 1.0 / kd) * mc.r_eps * bracket;
    if (!(mc.gamma > 0.0))
        throw DomainError(
            "gamma bracket is not positive; decrease eps or increase the grid constant c");

    mc.psi1 = mc.gamma;
    mc.d_sep = mc.gamma * mc.gamma / (4.0 * K * K);
    mc.N_bound = ball_covering_volumetric(n, mc.d_sep);
    mc.psi2 = eps / (2.0 * kd * C1 * mc.N_bound * mc.N_bound);
    mc.psi3 = mc.gamma / (2.0 * nd * (K + eps));
    mc.sigma = mc.gamma / 2.0;
    mc.r_loc = std::min(mc.sigma / (K + eps), mc.gamma / (mc.sigma * nd));
    mc.eta = mc.r_loc * mc.sigma / 2.0;
    return mc;
}

}  // namespace qmorse
