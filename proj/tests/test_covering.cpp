#include <doctest.h>

#include <cmath>
#include <random>

#include "qmorse/covering.hpp"

using namespace qmorse;

namespace {

std::vector<Vec> interval_points() {
    std::vector<Vec> pts;
    for (int i = 0; i <= 100; ++i) pts.push_back({i / 100.0});
    return pts;
}

}  // namespace

TEST_CASE("unit interval at eps 0.1 needs exactly five balls") {
    CoveringEstimate est = covering_number(interval_points(), 0.1);
    CHECK(est.upper == 5);
    CHECK(est.lower <= 5);
    CHECK(est.lower == 5);  // five points pairwise > 0.2 apart exist
    CHECK(static_cast<int>(est.centers.size()) == est.upper);
    CHECK(est.max_center_dist <= 0.1 * (1 + 1e-12));
}

TEST_CASE("singleton and empty clouds") {
    CoveringEstimate one = covering_number({{0.3, -0.7}}, 0.05);
    CHECK(one.upper == 1);
    CHECK(one.lower == 1);
    CoveringEstimate none = covering_number({}, 0.5);
    CHECK(none.upper == 0);
    CHECK(none.lower == 0);
}

TEST_CASE("64x64 unit square at eps 0.5") {
    std::vector<Vec> pts;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) pts.push_back({i / 63.0, j / 63.0});
    CoveringEstimate est = covering_number(pts, 0.5);
    CHECK(est.upper <= 4);
    CHECK(est.upper >= 1);
    CHECK(est.lower <= est.upper);
}

TEST_CASE("every point ends up within eps of a center") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec> pts;
        int n = 2 + trial % 2;
        for (int i = 0; i < 120; ++i) {
            Vec p(n);
            for (double& v : p) v = d(rng);
            pts.push_back(p);
        }
        double eps = 0.15 + 0.02 * trial;
        CoveringEstimate est = covering_number(pts, eps);
        for (const Vec& p : pts) {
            double best = 1e300;
            for (const Vec& c : est.centers) best = std::min(best, vec_dist(p, c));
            CHECK(best <= eps * (1 + 1e-12));
        }
        CHECK(est.lower <= est.upper);
    }
}

TEST_CASE("upper count is non-increasing in eps") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<Vec> pts;
    for (int i = 0; i < 200; ++i) pts.push_back({d(rng), d(rng)});
    int prev = 1 << 30;
    for (double eps : {0.1, 0.15, 0.2, 0.3, 0.5, 0.8}) {
        int up = covering_number(pts, eps).upper;
        CHECK(up <= prev);
        prev = up;
    }
}

TEST_CASE("ball covering closed forms") {
    CHECK(ball_covering_number(1, 1.0) == 1.0);
    CHECK(ball_covering_number(2, 1.0) == 1.0);
    CHECK(ball_covering_number(3, 1.0) == 1.0);
    CHECK(ball_covering_number(1, 0.5) == 2.0);
    double two = ball_covering_number(2, 0.5);
    CHECK(two >= 4.0);
    CHECK(two <= 9.0);
    // high dimension falls back to the volumetric bound
    CHECK(ball_covering_number(5, 1.0) <= std::pow(3.0, 5));
    CHECK(ball_covering_volumetric(2, 0.5) == doctest::Approx(25.0));
}

TEST_CASE("volumetric bound survives tiny radii as a double") {
    double huge = ball_covering_volumetric(6, 1e-6);
    CHECK(std::isfinite(huge));
    CHECK(huge > 1e36);
}
