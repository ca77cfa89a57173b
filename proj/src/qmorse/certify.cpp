#include "qmorse/certify.hpp"

#include <algorithm>
#include <cmath>

#include "qmorse/congruence.hpp"
#include "qmorse/errors.hpp"

namespace qmorse {

InverseCertificate inverse_certificate(const VectorMap& map, const Vec& x0, double K_lip,
                                       double hess_lip) {
    if (map.domain_dim() != map.image_dim())
        throw DomainError("inverse certificate needs a square map");
    if (!(K_lip > 0.0)) throw DomainError("K_lip must be positive");
    if (hess_lip < 0.0) throw DomainError("hess_lip must be non-negative");
    double clamp = map.domain_radius() - vec_norm(x0);
    if (!(clamp > 0.0)) throw DomainError("x0 must lie strictly inside the domain ball");

    SingularSpectrum s = singular_values(map.jacobian(x0));
    if (s.sigma_min <= 1e-10) throw DegenerateError("Jacobian is singular at x0");

    InverseCertificate cert;
    cert.x0 = x0;
    cert.K_lip = K_lip;
    cert.delta = 0.5 * s.sigma_min;
    cert.r = hess_lip > 0.0 ? std::min(cert.delta / hess_lip, clamp) : clamp;
    cert.domain_ball_radius = cert.r * cert.delta / (2.0 * K_lip);
    cert.image_ball_radius = cert.r * cert.delta / 2.0;
    cert.inv_lipschitz = 1.0 / cert.delta;
    return cert;
}

Vec newton_invert(const VectorMap& map, const InverseCertificate& cert, const Vec& y,
                  double tol) {
    Vec x = cert.x0;
    double yscale = 1.0 + vec_norm(y);
    for (int it = 0; it < 80; ++it) {
        Vec r = map.eval(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
        if (vec_norm(r) <= tol * yscale) return x;
        Vec dx = solve_lu(map.jacobian(x), r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dx[i];
    }
    throw DomainError("Newton inversion did not converge");
}

namespace {

struct Candidate {
    Vec x;
    double grad_norm;
};

bool lex_less(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

}  // namespace

IsolationResult isolate_criticals(const ScalarField& f, const DerivativeBudget& budget,
                                  double psi1_floor, int grid, double newton_tol) {
    if (!(psi1_floor > 0.0)) throw DomainError("psi1_floor must be positive");
    int n = f.dim();
    double R = f.domain_radius();

    // Cube lattice restricted to the ball; ||Df|| per point; seeds are lattice
    // local minima of ||Df|| among in-ball neighbors.
    std::vector<int> shape(n, grid);
    std::vector<Vec> pts;
    std::vector<double> gnorm;
    std::vector<int> flat_of;
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(grid);
    std::vector<int> index_map(total, -1);

    std::vector<int> idx(n, 0);
    Vec x(n);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int d = 0; d < n; ++d) {
            idx[d] = static_cast<int>(rem % grid);
            rem /= grid;
            x[d] = -R + 2.0 * R * idx[d] / (grid - 1);
        }
        if (vec_norm(x) <= R * (1.0 + 1e-12)) {
            index_map[flat] = static_cast<int>(pts.size());
            pts.push_back(x);
            gnorm.push_back(vec_norm(f.jet(x, 1).grad));
            flat_of.push_back(static_cast<int>(flat));
        }
    }

    std::vector<Vec> seeds;
    std::vector<std::size_t> powers(n, 1);
    for (int d = 1; d < n; ++d) powers[d] = powers[d - 1] * grid;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        std::size_t flat = static_cast<std::size_t>(flat_of[p]);
        bool is_min = true;
        for (int d = 0; d < n && is_min; ++d) {
            int coord = static_cast<int>(flat / powers[d]) % grid;
            for (int step : {-1, 1}) {
                int nc = coord + step;
                if (nc < 0 || nc >= grid) continue;
                std::size_t nf = flat + static_cast<std::size_t>(step) * powers[d];
                int ni = index_map[nf];
                if (ni >= 0 && gnorm[ni] < gnorm[p]) {
                    is_min = false;
                    break;
                }
            }
        }
        if (is_min) seeds.push_back(pts[p]);
    }

    // Newton refinement; divergence and exits from the ball drop the seed.
    std::vector<Candidate> cands;
    for (const Vec& seed : seeds) {
        Vec cur = seed;
        bool converged = false;
        for (int it = 0; it < 60 && !converged; ++it) {
            if (vec_norm(cur) > R * (1.0 + 1e-12)) break;
            JetValue jv = f.jet(cur, 2);
            double gn = vec_norm(jv.grad);
            if (gn <= newton_tol) {
                converged = true;
                break;
            }
            Vec dx;
            try {
                dx = solve_lu(jv.hess, jv.grad);
            } catch (const DegenerateError&) {
                break;
            }
            for (int d = 0; d < n; ++d) cur[d] -= dx[d];
        }
        if (!converged) continue;

        // Polish: a few more full steps while the gradient norm improves.
        Vec best = cur;
        double best_gn = vec_norm(f.jet(cur, 1).grad);
        for (int it = 0; it < 8; ++it) {
            JetValue jv = f.jet(cur, 2);
            Vec dx;
            try {
                dx = solve_lu(jv.hess, jv.grad);
            } catch (const DegenerateError&) {
                break;
            }
            for (int d = 0; d < n; ++d) cur[d] -= dx[d];
            if (vec_norm(cur) > R * (1.0 + 1e-12)) break;
            double gn = vec_norm(f.jet(cur, 1).grad);
            if (gn < best_gn) {
                best_gn = gn;
                best = cur;
            } else {
                break;
            }
        }
        if (vec_norm(best) >= R * (1.0 - 1e-9)) continue;  // boundary is out of scope
        cands.push_back({best, best_gn});
    }

    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return lex_less(a.x, b.x); });

    std::vector<Candidate> unique;
    for (const Candidate& c : cands) {
        bool merged = false;
        for (Candidate& u : unique) {
            if (vec_dist(c.x, u.x) <= newton_tol) {
                if (c.grad_norm < u.grad_norm) u = c;
                merged = true;
                break;
            }
        }
        if (!merged) unique.push_back(c);
    }

    IsolationResult res;
    for (const Candidate& c : unique) {
        JetValue jv = f.jet(c.x, 2);
        EigenSym e = jacobi_eigensym(jv.hess);
        double smin = std::abs(e.values[0]);
        int neg = 0;
        for (double lam : e.values) {
            smin = std::min(smin, std::abs(lam));
            if (lam < 0.0) ++neg;
        }
        double val = f.value(c.x);
        if (smin >= psi1_floor) {
            CriticalCertificate cert;
            cert.point = c.x;
            cert.hess_spectrum = e.values;
            cert.sigma_min_hess = smin;
            cert.morse_index = neg;
            cert.value = val;
            double ball = psi1_floor * psi1_floor / (8.0 * budget.K * budget.K);
            double clamp = R - vec_norm(c.x);
            cert.uniqueness_radius = budget.K > 0.0 ? std::min(ball, clamp) : clamp;
            res.certificates.push_back(std::move(cert));
        } else {
            NearDegenerateReport rep;
            rep.point = c.x;
            rep.sigma_min_hess = smin;
            rep.hess_spectrum = e.values;
            rep.value = val;
            res.near_degenerate.push_back(std::move(rep));
        }
    }
    return res;
}

}  // namespace qmorse
