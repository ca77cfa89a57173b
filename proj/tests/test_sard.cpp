#include <doctest.h>

#include <cmath>
#include <memory>

#include "qmorse/errors.hpp"
#include "qmorse/field.hpp"
#include "qmorse/maps.hpp"
#include "qmorse/sard.hpp"

using namespace qmorse;

TEST_CASE("lambda profile must be non-increasing and non-negative") {
    CHECK_NOTHROW(LambdaProfile({0.5, 0.5, 0.1}));
    CHECK_THROWS_AS(LambdaProfile({0.1, 0.5}), DomainError);
    CHECK_THROWS_AS(LambdaProfile({0.5, -0.1}), DomainError);
    CHECK_THROWS_AS(LambdaProfile({}), DomainError);
}

TEST_CASE("Rk follows the displayed formula exactly") {
    SardParameters p(1, 1, 3, 1.0, 6.0, 1.0, 1.0);
    CHECK(p.Rk == 3.0);  // 6 * 1^2 / 2!
    SardParameters q(2, 2, 4, 0.5, 12.0, 1.0, 0.25);
    CHECK(q.Rk == 12.0 * 0.125 / 6.0);  // 12 * 0.5^3 / 3!
}

TEST_CASE("bound substitution case k=2") {
    // term i=0: min(1,1); i=1: min(2*1*1, 1) -> bound 2 exactly
    SardParameters p(1, 1, 2, 1.0, 1.0, 1.0, 1.0);
    LambdaProfile L({2.0});
    CHECK(sard_bound(p, L, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("delta equal eps with huge lambdas collapses every min") {
    SardParameters p(2, 2, 3, 1.0, 4.0, 1.5, 0.3);
    LambdaProfile L({50.0, 50.0});
    double expected = 1.5 * std::pow(p.Rk / 0.3, 2.0 / 3.0) * 3.0;  // c*(Rk/eps)^(n/k)*(q+1)
    CHECK(sard_bound(p, L, 0.3) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("frozen cubic-map bound value") {
    SardParameters p(1, 1, 3, 1.0, 6.0, 1.0, 1.0);
    LambdaProfile L({0.3});
    CHECK(sard_bound(p, L, 0.1) == doctest::Approx(6.107232505953858).epsilon(1e-14));
}

TEST_CASE("degenerate top derivative gives a zero bound") {
    SardParameters p(1, 1, 3, 1.0, 0.0, 1.0, 1.0);
    LambdaProfile L({0.5});
    CHECK(sard_bound(p, L, 0.5) == 0.0);
}

TEST_CASE("epsilon beyond delta is rejected") {
    SardParameters p(1, 1, 3, 1.0, 6.0, 1.0, 0.5);
    LambdaProfile L({0.3});
    CHECK_THROWS_AS((void)sard_bound(p, L, 0.6), DomainError);
    CHECK_THROWS_AS((void)sard_bound(p, L, 0.0), DomainError);
}

TEST_CASE("bound is non-increasing in eps on a log grid") {
    SardParameters p(2, 2, 3, 1.0, 5.0, 1.0, 1.0);
    LambdaProfile L({0.4, 0.2});
    double prev = -1.0;
    for (int i = 0; i < 20; ++i) {
        double eps = std::pow(10.0, -3.0 + 3.0 * i / 19.0);  // 1e-3 .. 1
        double b = sard_bound(p, L, eps);
        if (prev >= 0.0) CHECK(b <= prev * (1 + 1e-12));
        prev = b;
    }
}

TEST_CASE("constant-Hessian gradient map has empty Lambda-critical set") {
    auto f = std::make_shared<FunctionSpec>(2, 3, "x1^2 + x2^2", 1.0);
    GradientMap map(f);
    auto pts = lambda_critical_points(map, LambdaProfile({0.1, 0.1}), 16);
    CHECK(pts.empty());
}

TEST_CASE("vacuous thresholds keep every grid point") {
    auto f = std::make_shared<FunctionSpec>(2, 3, "x1^2 + x2^2", 1.0);
    GradientMap map(f);
    auto all = lambda_critical_points(map, LambdaProfile({100.0, 100.0}), 12);
    auto grid = ball_grid(2, 1.0, 12);
    CHECK(all.size() == grid.size());
}

TEST_CASE("cubic gradient map thresholds solve |6x| <= 0.3") {
    auto f = std::make_shared<FunctionSpec>(1, 3, "x1^3", 1.0);
    GradientMap map(f);
    auto pts = lambda_critical_points(map, LambdaProfile({0.3}), 64);
    CHECK(!pts.empty());
    for (const Vec& p : pts) CHECK(std::abs(p[0]) <= 0.05 + 1e-12);
}

TEST_CASE("compare table: empty sample gives zero rows") {
    auto f = std::make_shared<FunctionSpec>(2, 3, "x1^2 + x2^2", 1.0);
    GradientMap map(f);
    SardParameters p(2, 2, 3, 1.0, 2.0, 1.0, 1.0);
    auto rows = sard_compare(map, LambdaProfile({0.1, 0.1}), p, {0.5, 0.25}, 16);
    REQUIRE(rows.size() == 2);
    for (const SardRow& r : rows) {
        CHECK(r.empirical_upper == 0);
        CHECK(r.ratio == 0.0);
        CHECK(!r.c_too_small);
    }
}

TEST_CASE("compare table: cubic empirical counts grow as eps shrinks") {
    auto f = std::make_shared<FunctionSpec>(1, 3, "x1^3", 1.0);
    GradientMap map(f);
    SardParameters p(1, 1, 3, 1.0, 6.0, 1.0, 1.0);
    auto rows = sard_compare(map, LambdaProfile({0.3}), p, {0.5, 0.25, 0.1}, 128);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].empirical_upper <= rows[1].empirical_upper);
    CHECK(rows[1].empirical_upper <= rows[2].empirical_upper);
    for (const SardRow& r : rows) {
        CHECK(std::isfinite(r.bound));
        CHECK(r.bound > 0.0);
        CHECK(r.ratio >= 0.0);
    }
}

TEST_CASE("table serializes with the fixed header") {
    SardRow row;
    row.epsilon = 0.5;
    row.empirical_upper = 2;
    row.bound = 4.0;
    row.ratio = 0.5;
    std::string csv = sard_table_csv({row});
    CHECK(csv.find("epsilon,empirical_upper,bound,ratio") == 0);
    CHECK(csv.find("0.5,2,4,0.5") != std::string::npos);
}
