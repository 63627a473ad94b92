#include "walkarith/arith.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace walkarith;

namespace {

// Trial-division oracles, independent of the sieve.
std::vector<std::pair<uint64_t, unsigned>> trial_factor(uint64_t n) {
    std::vector<std::pair<uint64_t, unsigned>> f;
    for (uint64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) n /= p, ++e;
        if (e) f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

int naive_mu(uint64_t n) {
    int m = 1;
    for (auto [p, e] : trial_factor(n)) {
        if (e > 1) return 0;
        m = -m;
    }
    return m;
}

uint64_t naive_phi(uint64_t n) {
    uint64_t c = 0;
    for (uint64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
    return c;
}

const ArithCache& cache() {
    static const ArithCache c(40000);
    return c;
}

}  // namespace

TEST(Sieve, SmallExamples) {
    const ArithCache c = sieve_build(30);
    EXPECT_EQ(c.mu(30), -1);
    EXPECT_EQ(c.phi(1), 1u);
    EXPECT_EQ(c.p_minus(30), 2u);
    EXPECT_EQ(c.p_plus(30), 5u);
    EXPECT_EQ(c.divisor_count(12), 6u);
    EXPECT_DOUBLE_EQ(c.sigma(6, 1.0), 12.0);
    EXPECT_EQ(c.p_minus(1), infinite_factor);
    EXPECT_EQ(c.p_plus(1), 1u);
}

TEST(Sieve, RangeChecks) {
    EXPECT_THROW(ArithCache(1), capacity_error);
    EXPECT_THROW(ArithCache(sieve_max + 1), capacity_error);
    EXPECT_THROW(cache().mu(0), capacity_error);
    EXPECT_THROW(cache().mu(40001), capacity_error);
}

TEST(Sieve, MatchesTrialDivisionTo1e4) {
    const auto& c = cache();
    for (uint64_t n = 1; n <= 10000; ++n) {
        const auto f = trial_factor(n);
        ASSERT_EQ(c.factorize(n), f) << n;
        ASSERT_EQ(c.mu(n), naive_mu(n)) << n;
        uint64_t dc = 1;
        for (auto [p, e] : f) dc *= e + 1;
        ASSERT_EQ(c.divisor_count(n), dc) << n;
        ASSERT_EQ(c.is_prime(n), f.size() == 1 && f[0].second == 1) << n;
    }
    for (uint64_t n = 1; n <= 2000; ++n) ASSERT_EQ(c.phi(n), naive_phi(n)) << n;
}

TEST(Sieve, SpfOfPrimeIsItself) {
    for (auto p : cache().primes()) ASSERT_EQ(cache().spf(p), p);
    EXPECT_EQ(cache().prime_pi(100), 25u);
    EXPECT_EQ(cache().prime_pi(10000), 1229u);
}

TEST(Sieve, MobiusSumOverDivisors) {
    for (uint64_t n = 1; n <= 20000; ++n) {
        int s = 0;
        for (auto d : cache().divisors(n)) s += cache().mu(d);
        ASSERT_EQ(s, n == 1 ? 1 : 0) << n;
    }
}

TEST(Sieve, TotientProductFormula) {
    for (uint64_t n = 1; n <= 20000; ++n) {
        double v = static_cast<double>(n);
        for (auto [p, e] : cache().factorize(n)) v *= 1.0 - 1.0 / static_cast<double>(p);
        ASSERT_NEAR(static_cast<double>(cache().phi(n)), v, 1e-6) << n;
    }
}

TEST(Sieve, OmegaVariantsAndSmoothCount) {
    EXPECT_EQ(cache().omega(360), 3u);
    EXPECT_EQ(cache().omega_with_multiplicity(360), 6u);
    EXPECT_EQ(cache().omega_big_sum(360), 10u);
    // 5-smooth numbers up to 30: 1,2,3,4,5,6,8,9,10,12,15,16,18,20,24,25,27,30.
    EXPECT_EQ(cache().smooth_count(30, 5), 18u);
    EXPECT_EQ(ArithCache::valuation(48, 2), 4u);
}

TEST(Sieve, KfreeFlags) {
    const auto f = cache().kfree_flags(2);
    EXPECT_EQ(f[0], 0);
    EXPECT_EQ(f[1], 1);
    EXPECT_EQ(f[12], 0);
    uint64_t c = 0;
    for (uint64_t n = 1; n <= 100; ++n) c += f[n];
    EXPECT_EQ(c, 61u);  // squarefree integers up to 100
    const auto f3 = cache().kfree_flags(3);
    EXPECT_EQ(f3[12], 1);
    EXPECT_EQ(f3[24], 0);
    EXPECT_THROW(cache().kfree_flags(1), domain_error);
}

TEST(Constants, Values) {
    const auto& k = constants();
    EXPECT_NEAR(k.zeta(2), pi * pi / 6, 1e-12);
    EXPECT_NEAR(k.euler_gamma, 0.57721566490153286, 1e-15);
    EXPECT_NEAR(k.mertens_factor, 0.56145948356688517, 1e-15);
    EXPECT_NEAR(k.rademacher_s, 2.0000000108, 1e-10);
    EXPECT_LT(k.rademacher_s_tail_bound, 1e-15);
    EXPECT_THROW(k.zeta(11), domain_error);
}

TEST(RhoK, Examples) {
    const auto& c = cache();
    EXPECT_EQ(rho_k_formula(0, 12, c), 2u);
    EXPECT_EQ(rho_k_formula(2, 8, c), 4u);
    EXPECT_EQ(rho_k_formula(3, 9, c), 3u);
    EXPECT_EQ(rho_k_bruteforce(1, 2), 2u);
    EXPECT_EQ(rho_k_bruteforce(0, 1), 1u);
    EXPECT_EQ(rho_k_bruteforce(5, 7), 2u);
    EXPECT_THROW(rho_k_formula(1, 0, c), domain_error);
    EXPECT_THROW(rho_k_bruteforce(1, 0), domain_error);
}

TEST(RhoK, FormulaMatchesBruteForceExhaustive) {
    const auto& c = cache();
    for (uint64_t D = 1; D <= 2000; ++D)
        for (uint64_t k = 0; k <= 200; ++k) ASSERT_EQ(rho_k_formula(k, D, c), rho_k_bruteforce(k, D)) << k << ' ' << D;
}

TEST(RhoK, PrintedFormulaDisagreesWhenPrimeDoesNotDivideK) {
    const auto& c = cache();
    // p = 7 does not divide k = 5: two roots y = 0, -5 mod 7, the printed form gives 1.
    EXPECT_EQ(rho_k_bruteforce(5, 7), 2u);
    EXPECT_EQ(rho_k_formula_literal(5, 7, c), 1u);
    EXPECT_EQ(rho_k_formula_literal(0, 12, c), 2u);
    // The size bound with 2^{omega(gcd(k, D_{1/2}))} fails on the same pair: gcd = 1.
    EXPECT_GT(rho_k_bruteforce(5, 7), std::gcd(uint64_t{5}, d_half(7, c)));
}

TEST(RhoK, Multiplicative) {
    const auto& c = cache();
    for (uint64_t a = 1; a <= 200; ++a)
        for (uint64_t b = 1; b <= 200; ++b) {
            if (std::gcd(a, b) != 1) continue;
            for (uint64_t k : {0u, 1u, 2u, 6u, 12u, 30u, 97u})
                ASSERT_EQ(rho_k_formula(k, a * b, c), rho_k_formula(k, a, c) * rho_k_formula(k, b, c));
        }
}

TEST(RhoK, SizeBounds) {
    const auto& c = cache();
    for (uint64_t D = 1; D <= 2000; ++D) {
        const uint64_t dh = d_half(D, c);
        ASSERT_LE(static_cast<double>(rho_k_formula(0, D, c)), std::sqrt(static_cast<double>(D)) + 1e-9);
        for (uint64_t k = 1; k <= 60; ++k) {
            const uint64_t g = std::gcd(k, dh);
            ASSERT_LE(rho_k_formula(k, D, c), (uint64_t{1} << c.omega(D)) * g);
        }
    }
}

TEST(LcmSum, Examples) {
    const auto& c = cache();
    EXPECT_DOUBLE_EQ(lcm_power_sum(1, 1.0, c), 1.0);
    EXPECT_DOUBLE_EQ(lcm_power_sum(2, 1.0, c), 2.5);
    EXPECT_THROW(lcm_power_sum(10, 0.0, c), domain_error);
    for (double s : {0.3, 0.5, 1.0})
        for (uint64_t N : {1u, 17u, 100u, 300u}) EXPECT_NEAR(lcm_power_sum(N, s, c), lcm_power_sum_bruteforce(N, s), 1e-9 * N * N);
}

TEST(LcmSum, LeadingTermAtScale) {
    const ArithCache big(100000);
    const double N = 1e5, L = std::log(N);
    const double v = lcm_power_sum(100000, 1.0, big);
    EXPECT_LT(std::fabs(v - L * L * L / (pi * pi)) / (L * L), 1.0);
}

TEST(Mobius, InversionExamples) {
    const auto& c = cache();
    auto cube = [](uint64_t n) { return 1.0 / std::pow(static_cast<double>(n), 3); };
    EXPECT_NEAR(mobius_invert_truncated(cube, 1, 10000, c), 1.0 / boost::math::zeta(3.0), 1e-8);
    EXPECT_NEAR(mobius_invert_truncated(cube, 1, 10000, c), 0.83190, 1e-5);
    auto delta1 = [](uint64_t n) { return n == 1 ? 1.0 : 0.0; };
    EXPECT_DOUBLE_EQ(mobius_invert_truncated(delta1, 1, 50, c), 1.0);
    EXPECT_NEAR(mobius_forward_check(cube, 1, 10000, c), 1.0, 1e-8);
}

TEST(Mobius, ForwardCheckDoubleSumOracle) {
    // Direct double sum over pairs (m, n) with m n <= T.
    const auto& c = cache();
    auto g = [](uint64_t n) { return 1.0 / (static_cast<double>(n) * static_cast<double>(n)); };
    const uint64_t T = 500;
    double direct = 0.0;
    for (uint64_t m = 1; m <= T; ++m)
        for (uint64_t n = 1; n * m <= T; ++n) direct += c.mu(n) * g(n * m * 3);
    EXPECT_NEAR(mobius_forward_check(g, 3, T, c), direct, 1e-12);
    EXPECT_NEAR(direct, g(3), 1e-15);
}

TEST(Zaremba, Examples) {
    const auto& c = cache();
    const auto z1 = erdos_zaremba(1, c);
    EXPECT_EQ(z1.phi, 0.0);
    EXPECT_EQ(z1.psi, 0.0);
    EXPECT_NEAR(erdos_zaremba(4, c).phi, std::log(2.0) / 2 + std::log(4.0) / 4, 1e-15);
    EXPECT_NEAR(erdos_zaremba(4, c).phi, 0.6931, 1e-4);
    EXPECT_NEAR(erdos_zaremba(6, c).phi, 1.0115, 1e-4);
    EXPECT_EQ(erdos_zaremba(2, c).psi, 0.0);
    EXPECT_NEAR(erdos_zaremba(3, c).psi, std::log(3.0) * std::log(std::log(3.0)) / 3, 1e-15);
}
