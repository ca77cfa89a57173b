#include <doctest.h>

#include <cmath>

#include "qmorse/constants.hpp"
#include "qmorse/errors.hpp"

using namespace qmorse;

TEST_CASE("ledger at K=1, eps=0.1, n=2, k=3, c=1") {
    MorseConstants mc = compute_constants(1.0, 0.1, 2, 3, 1.0, 1.0);
    CHECK(mc.Rk == 0.5);
    CHECK(mc.r_eps == doctest::Approx(0.022360679774997897).epsilon(1e-15));
    CHECK(mc.gamma == doctest::Approx(0.010704510514158251).epsilon(1e-15));
    CHECK(mc.d_sep == doctest::Approx(2.8646636336931136e-05).epsilon(1e-15));
    CHECK(mc.psi3 == doctest::Approx(0.0024328432986723296).epsilon(1e-15));
    CHECK(mc.eta == doctest::Approx(1.3021198334968697e-05).epsilon(1e-15));
}

TEST_CASE("ledger at K=2 (round quadratic corpus)") {
    MorseConstants mc = compute_constants(2.0, 0.1, 2, 3, 1.0, 1.0);
    CHECK(mc.gamma == doctest::Approx(0.009536634695383371).epsilon(1e-15));
    CHECK(mc.d_sep == doctest::Approx(5.684212582074368e-06).epsilon(1e-15));
    CHECK(mc.psi3 == doctest::Approx(0.001135313654212306).epsilon(1e-15));
    CHECK(mc.eta == doctest::Approx(5.413535792451779e-06).epsilon(1e-15));
}

TEST_CASE("ledger at K=6, n=1 (cubic corpus)") {
    MorseConstants mc = compute_constants(6.0, 0.1, 1, 3, 1.0, 1.0);
    CHECK(mc.gamma == doctest::Approx(0.004871894233480652).epsilon(1e-15));
    CHECK(mc.psi3 == doctest::Approx(0.00039933559290825023).epsilon(1e-15));
    CHECK(mc.eta == doctest::Approx(4.863801930783204e-07).epsilon(1e-15));
}

TEST_CASE("ledger at K=48 (quartic corpus)") {
    MorseConstants mc = compute_constants(48.0, 0.1, 2, 3, 1.0, 1.0);
    CHECK(mc.gamma == doctest::Approx(0.005615131613479418).epsilon(1e-15));
    CHECK(mc.d_sep == doctest::Approx(3.4211917357526014e-09).epsilon(1e-15));
}

TEST_CASE("identities hold at the bit level") {
    for (double K : {0.5, 1.0, 2.0, 7.5, 48.0}) {
        MorseConstants mc = compute_constants(K, 0.1, 2, 3, 1.0, 1.0);
        CHECK(mc.psi1 == mc.gamma);
        CHECK(mc.d_sep == mc.gamma * mc.gamma / (4.0 * K * K));
        CHECK(mc.sigma == mc.gamma / 2.0);
        CHECK(mc.eta == mc.r_loc * mc.gamma / 4.0);
        CHECK(mc.psi3 == mc.gamma / (2.0 * mc.n * (K + mc.eps)));
        CHECK(mc.r_loc == std::min(mc.sigma / (K + mc.eps), mc.gamma / (mc.sigma * mc.n)));
    }
}

TEST_CASE("all ledger fields positive for positive K") {
    MorseConstants mc = compute_constants(3.0, 0.2, 3, 4, 1.0, 2.0);
    CHECK(mc.Rk > 0.0);
    CHECK(mc.r_eps > 0.0);
    CHECK(mc.gamma > 0.0);
    CHECK(mc.psi1 > 0.0);
    CHECK(mc.d_sep > 0.0);
    CHECK(mc.N_bound >= 1.0);
    CHECK(mc.psi2 > 0.0);
    CHECK(mc.psi3 > 0.0);
    CHECK(mc.sigma > 0.0);
    CHECK(mc.r_loc > 0.0);
    CHECK(mc.eta > 0.0);
}

TEST_CASE("doubling K strictly shrinks gamma and d_sep") {
    double prev_gamma = 1e300, prev_d = 1e300;
    for (double K : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        MorseConstants mc = compute_constants(K, 0.1, 2, 3, 1.0, 1.0);
        CHECK(mc.gamma < prev_gamma);
        CHECK(mc.d_sep < prev_d);
        prev_gamma = mc.gamma;
        prev_d = mc.d_sep;
    }
}

TEST_CASE("precondition violations are rejected") {
    CHECK_THROWS_AS((void)compute_constants(0.0, 0.1, 2, 3, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)compute_constants(1.0, 0.0, 2, 3, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)compute_constants(1.0, 0.1, 2, 2, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)compute_constants(1.0, 0.1, 2, 3, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)compute_constants(1.0, 0.1, 2, 3, 1.0, 0.0), DomainError);
}

TEST_CASE("gamma stays positive on both r_eps branches") {
    // r_eps = min(eps, alt)/2 caps the subtracted term on either branch:
    // alt branch leaves 1 - 0.5^(n(k-1)/k) (c cancels), eps branch needs
    // c^(k/n)*Rk <= eps which forces the term below 0.5^(k-1) < 1.
    for (double K : {0.1, 1.0, 6.0, 50.0})
        for (double eps : {0.01, 0.5, 2.0})
            for (int n : {1, 2, 3})
                for (int k : {3, 4, 5})
                    for (double c : {0.2, 1.0, 25.0}) {
                        MorseConstants mc = compute_constants(K, eps, n, k, c, 1.0);
                        CHECK(mc.gamma > 0.0);
                    }
    // alt branch value is exact: gamma = Rk^(1/k) * r_eps * (1 - 0.5^(n(k-1)/k))
    MorseConstants mc = compute_constants(6.0, 0.5, 1, 3, 1.0, 1.0);
    double bracket = 1.0 - std::pow(0.5, 2.0 / 3.0);
    CHECK(mc.gamma == doctest::Approx(std::pow(3.0, 1.0 / 3.0) * mc.r_eps * bracket)
                          .epsilon(1e-14));
}

TEST_CASE("psi2 tracks C1 inversely") {
    MorseConstants a = compute_constants(2.0, 0.1, 2, 3, 1.0, 1.0);
    MorseConstants b = compute_constants(2.0, 0.1, 2, 3, 1.0, 10.0);
    CHECK(b.psi2 == doctest::Approx(a.psi2 / 10.0).epsilon(1e-14));
}
