#include "qmorse/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Greedy max-coverage: repeatedly pick the input point covering the most
// still-uncovered points; ties go to the lowest index.
std::vector<Vec> greedy_cover(const std::vector<Vec>& pts, double tol2) {
    std::vector<char> covered(pts.size(), 0);
    std::size_t remaining = pts.size();
    std::vector<Vec> centers;
    while (remaining > 0) {
        std::size_t best = 0;
        int best_cov = -1;
        for (std::size_t c = 0; c < pts.size(); ++c) {
            int cov = 0;
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (!covered[j] && dist2(pts[j], pts[c]) <= tol2) ++cov;
            if (cov > best_cov) {
                best_cov = cov;
                best = c;
            }
        }
        centers.push_back(pts[best]);
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (!covered[j] && dist2(pts[j], pts[best]) <= tol2) {
                covered[j] = 1;
                --remaining;
            }
    }
    return centers;
}

// Axis-aligned lattice of cells with side 2*eps/sqrt(n) anchored at the
// bounding-box corner; cell diameter is exactly 2*eps, so cell centers cover
// every point in their cell within eps.
std::vector<Vec> lattice_cover(const std::vector<Vec>& pts, double eps) {
    int n = static_cast<int>(pts[0].size());
    double h = 2.0 * eps / std::sqrt(static_cast<double>(n));
    Vec lo = pts[0];
    for (const Vec& p : pts)
        for (int d = 0; d < n; ++d) lo[d] = std::min(lo[d], p[d]);

    std::map<std::vector<std::int64_t>, char> cells;
    std::vector<std::int64_t> key(n);
    for (const Vec& p : pts) {
        for (int d = 0; d < n; ++d) {
            double t = (p[d] - lo[d]) / h;
            std::int64_t i = static_cast<std::int64_t>(std::floor(t));
            // A point landing exactly on a cell's upper face belongs to it.
            if (i > 0 && t - static_cast<double>(i) == 0.0) --i;
            key[d] = std::max<std::int64_t>(0, i);
        }
        cells[key] = 1;
    }
    std::vector<Vec> centers;
    centers.reserve(cells.size());
    for (const auto& [k, unused] : cells) {
        (void)unused;
        Vec c(n);
        for (int d = 0; d < n; ++d) c[d] = lo[d] + (static_cast<double>(k[d]) + 0.5) * h;
        centers.push_back(c);
    }
    return centers;
}

}  // namespace

CoveringEstimate covering_number(const std::vector<Vec>& points, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("covering radius must be positive");
    CoveringEstimate est;
    est.epsilon = epsilon;
    if (points.empty()) return est;

    double tol = epsilon * (1.0 + 1e-12);
    double tol2 = tol * tol;

    std::vector<Vec> greedy = greedy_cover(points, tol2);
    std::vector<Vec> lattice = lattice_cover(points, epsilon);
    est.centers = lattice.size() < greedy.size() ? std::move(lattice) : std::move(greedy);
    est.upper = static_cast<int>(est.centers.size());

    for (const Vec& p : points) {
        double best = dist2(p, est.centers[0]);
        for (std::size_t c = 1; c < est.centers.size(); ++c)
            best = std::min(best, dist2(p, est.centers[c]));
        est.max_center_dist = std::max(est.max_center_dist, std::sqrt(best));
    }
    if (est.max_center_dist > tol)
        throw Error("internal covering construction failed validity check");

    // Greedy 2-epsilon packing: keep a point iff clearly farther than
    // 2*epsilon from all kept points. Any epsilon-ball contains at most one
    // kept point, so the count bounds every valid covering from below.
    double sep = 2.0 * epsilon * (1.0 + 1e-9);
    double sep2 = sep * sep;
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < points.size(); ++j) {
        bool ok = true;
        for (std::size_t k : kept)
            if (dist2(points[j], points[k]) <= sep2) {
                ok = false;
                break;
            }
        if (ok) kept.push_back(j);
    }
    est.lower = static_cast<int>(kept.size());
    return est;
}

double ball_covering_volumetric(int n, double rho) {
    if (n < 1) throw DomainError("dimension must be positive");
    if (!(rho > 0.0)) throw DomainError("covering radius must be positive");
    double v = std::pow(1.0 + 2.0 / rho, static_cast<double>(n));
    return v < 9.0e15 ? std::ceil(v) : v;
}

double ball_covering_number(int n, double rho) {
    double vol = ball_covering_volumetric(n, rho);
    if (rho >= 1.0) return 1.0;  // one ball at the origin suffices
    if (n > 3) return vol;

    // Constructive lattice count: cells of side h = 2*rho/sqrt(n) tiling
    // [-1,1]^n; a cell is needed iff it meets the unit ball.
    double h = 2.0 * rho / std::sqrt(static_cast<double>(n));
    std::int64_t per_axis = static_cast<std::int64_t>(std::ceil(2.0 / h));
    if (per_axis > 4000) return vol;  // lattice would not beat the bound anyway
    std::int64_t count = 0;
    std::vector<std::int64_t> idx(n, 0);
    while (true) {
        double nearest2 = 0.0;
        for (int d = 0; d < n; ++d) {
            double a = -1.0 + idx[d] * h;
            double b = std::min(1.0, a + h);
            double c = a <= 0.0 && 0.0 <= b ? 0.0 : std::min(std::abs(a), std::abs(b));
            nearest2 += c * c;
        }
        if (nearest2 <= 1.0) ++count;
        int d = 0;
        while (d < n && ++idx[d] == per_axis) {
            idx[d] = 0;
            ++d;
        }
        if (d == n) break;
    }
    return std::min(vol, static_cast<double>(count));
}

}  // namespace qmorse
