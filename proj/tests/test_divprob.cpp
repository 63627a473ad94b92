#include "walkarith/arith.hpp"
#include "walkarith/divprob.hpp"

#include <gtest/gtest.h>

using namespace walkarith;

namespace {

// P{d | B_n + u} by summing Pascal's row as exact rationals.
double oracle_div(uint64_t n, uint64_t d, uint64_t u) {
    const auto row = binomial_row(n);
    bigint s = 0;
    for (uint64_t k = 0; k <= n; ++k)
        if ((k + u) % d == 0) s += row[k];
    return to_double(rational(s, bigint(1) << n));
}

}  // namespace

TEST(DivExact, Examples) {
    EXPECT_EQ(div_exact(ModelSpec::bernoulli(3), 2), 0.5);
    EXPECT_EQ(div_exact(ModelSpec::bernoulli(4), 3), 5.0 / 16);
    for (auto m : {ModelSpec::bernoulli(9, 0.3), ModelSpec::rademacher(7), ModelSpec::cramer(40)}) EXPECT_EQ(div_exact(m, 1), 1.0);
    EXPECT_THROW(div_exact(ModelSpec::bernoulli(3), 0), domain_error);
}

TEST(DivExact, ShiftAndRademacher) {
    EXPECT_EQ(div_exact(ModelSpec::bernoulli(4, 0.5, 1), 3), oracle_div(4, 3, 1));
    // R_4 in {-4,-2,0,2,4} with counts 1,4,6,4,1: 4 | R_4 on {-4,0,4}.
    EXPECT_EQ(div_exact(ModelSpec::rademacher(4), 4), 8.0 / 16);
}

TEST(Spectral, Examples) {
    EXPECT_NEAR(div_spectral_bernoulli(4, 3), 0.3125, 1e-15);
    EXPECT_NEAR(div_spectral_bernoulli(3, 2), 0.5, 1e-15);
    EXPECT_EQ(div_spectral_bernoulli(17, 1), 1.0);
    const double big = div_spectral_bernoulli(100'000'000, 100, 7);
    EXPECT_GE(big, 0.0);
    EXPECT_LE(big, 1.0);
    EXPECT_NEAR(big, theta_shifted(100, 100'000'000, 7) / 100, 1e-6);
}

TEST(Spectral, IdentityAgainstRationalOracle) {
    for (uint64_t n = 1; n <= 150; ++n)
        for (uint64_t d = 2; d <= n; ++d)
            for (uint64_t u : {0u, 1u, 5u}) ASSERT_NEAR(div_spectral_bernoulli(n, d, u), oracle_div(n, d, u), 1e-13) << n << ' ' << d << ' ' << u;
}

TEST(Spectral, BinomialGeneralRho) {
    for (double rho : {0.2, 1.0 / 3, 0.5, 0.8})
        for (uint64_t n : {5u, 60u, 400u})
            for (uint64_t d : {2u, 3u, 7u, 12u})
                for (uint64_t u : {0u, 4u}) {
                    const auto p = pmf_exact(ModelSpec::bernoulli(n, rho), false);
                    ASSERT_NEAR(div_spectral_binomial(n, d, rho, u), div_exact_pmf(p, d, u), 1e-12);
                }
    EXPECT_NEAR(div_spectral_binomial(50, 6, 0.5, 3), div_spectral_bernoulli(50, 6, 3), 1e-14);
}

TEST(Spectral, BasicEnvelope) {
    for (uint64_t n = 2; n <= 400; n += 7)
        for (uint64_t d = 2; d <= n; ++d)
            ASSERT_LE(std::fabs(div_spectral_bernoulli(n, d) - 1.0 / d), basic_envelope(n, d) + 1e-15) << n << ' ' << d;
}

TEST(Rademacher, Examples) {
    EXPECT_NEAR(div_spectral_rademacher(2, 2), 1.0, 1e-15);
    EXPECT_EQ(div_spectral_rademacher(3, 2), 0.0);
    EXPECT_NEAR(div_spectral_rademacher(100, 4), div_exact(ModelSpec::rademacher(100), 4), 1e-12);
    for (uint64_t M = 1; M <= 60; ++M)
        for (uint64_t delta = 1; delta <= 40; ++delta)
            ASSERT_NEAR(div_spectral_rademacher(M, delta), div_exact(ModelSpec::rademacher(M), delta), 1e-13) << M << ' ' << delta;
}

TEST(Rademacher, SmallDeltaForm) {
    // Exact for small delta once higher harmonics are negligible.
    EXPECT_NEAR(rademacher_small_delta_form(400, 6), div_spectral_rademacher(400, 6), 1e-12);
    // For delta = 5, 6 the leading harmonics are the only ones, so the form is exact there.
    for (uint64_t M = 2; M <= 40; M += 2) EXPECT_NEAR(rademacher_small_delta_form(M, 6), div_spectral_rademacher(M, 6), 1e-15) << M;
    for (uint64_t M = 1; M <= 41; M += 2) EXPECT_NEAR(rademacher_small_delta_form(M, 5), div_spectral_rademacher(M, 5), 1e-15) << M;
    EXPECT_THROW(rademacher_small_delta_form(5, 3), domain_error);
    EXPECT_THROW(rademacher_small_delta_form(4, 2), domain_error);
    EXPECT_NEAR(rademacher_small_delta_form(401, 5), div_spectral_rademacher(401, 5), 1e-12);
    EXPECT_THROW(rademacher_small_delta_form(401, 6), domain_error);
}

TEST(Theta, Examples) {
    // Three dominant terms plus the l = 2 pair; the quoted 1.0143836 is the three-term value rounded.
    EXPECT_NEAR(theta_plain(2, 4), 1 + 2 * std::exp(-pi * pi / 2) + 2 * std::exp(-2 * pi * pi), 1e-15);
    EXPECT_NEAR(theta_plain(2, 4), 1.0143836, 2e-7);
    EXPECT_NEAR(theta_rademacher_even(2, 4), 2.0000000108, 1e-10);
    EXPECT_NEAR(theta_rademacher_even(2, 4), constants().rademacher_s, 1e-15);
    for (uint64_t n = 4; n <= 40; ++n) EXPECT_NEAR(theta_plain(1, n), 1.0, 1e-8);
}

TEST(Theta, VariantsThroughParams) {
    ThetaParams p;
    p.d = 7;
    EXPECT_EQ(theta_eval(p, {ThetaKind::plain, 50, 0}), theta_plain(7, 50));
    EXPECT_EQ(theta_eval(p, {ThetaKind::shifted, 50, 3}), theta_shifted(7, 50, 3));
    EXPECT_EQ(theta_eval(p, {ThetaKind::rademacher_even, 50, 0}), theta_rademacher_even(7, 50));
    EXPECT_EQ(theta_eval(p, {ThetaKind::rademacher_odd, 51, 0}), theta_rademacher_odd(7, 51));
    p.m = 12.3;
    p.B = 4.5;
    EXPECT_EQ(theta_eval(p, {ThetaKind::cramer, 0, 0}), theta_cramer(7, 12.3, 4.5));
    p.tail_tol = 0;
    EXPECT_THROW(theta_eval(p, {ThetaKind::plain, 50, 0}), domain_error);
}

TEST(Theta, DirectComplexSumOracle) {
    // Plain complex summation over |l| <= 200, no symmetry used.
    for (uint64_t d : {3u, 10u, 31u})
        for (uint64_t n : {9u, 100u, 1000u})
            for (uint64_t u : {0u, 2u}) {
                std::complex<double> s{0, 0};
                for (int l = -200; l <= 200; ++l)
                    s += std::polar(std::exp(-static_cast<double>(n) * pi * pi * l * l / (2.0 * d * d)), pi * (2.0 * u + n) * l / d);
                EXPECT_NEAR(theta_shifted(d, n, u), s.real(), 1e-12);
                EXPECT_NEAR(s.imag(), 0.0, 1e-12);
            }
}

TEST(Theta, PeriodicityInShift) {
    for (uint64_t n : {16u, 101u})
        for (uint64_t d = 2; d <= 20; ++d) EXPECT_NEAR(theta_shifted(d, n, 0), theta_shifted(d, n, d), 1e-13);
    EXPECT_NEAR(theta_shifted(2, 64, 0), theta_shifted(2, 64, 64), 1e-15);
}

TEST(Theta, TruncationErrors) {
    EXPECT_THROW(theta_truncation(0.0, 1e-15), truncation_error);
    EXPECT_THROW(theta_truncation(1e-14, 1e-15), truncation_error);
    EXPECT_EQ(theta_truncation(100.0, 1e-15), 0u);
}

TEST(Theta, PoissonResidualExamples) {
    EXPECT_LT(theta_poisson_residual(2, 4), 1e-12);
    EXPECT_LT(theta_poisson_residual(5, 100), 1e-12);
    EXPECT_LT(theta_poisson_residual(1000, 1000), 1e-10);
    EXPECT_THROW(theta_poisson_residual(1, 10), domain_error);
}

TEST(Audit, ThetaUniformRowsSorted) {
    const auto rows = audit_theta_uniform({32, 16});
    ASSERT_EQ(rows.size(), 15u + 31u);
    EXPECT_EQ(rows.front().n, 16);
    EXPECT_EQ(rows.front().d, 2);
    for (std::size_t i = 1; i < rows.size(); ++i)
        ASSERT_TRUE(rows[i - 1].n < rows[i].n || (rows[i - 1].n == rows[i].n && rows[i - 1].d < rows[i].d));
    int flags = 0;
    for (const auto& r : rows) {
        flags += r.argmax_flag;
        ASSERT_TRUE(std::isfinite(r.scaled_err));
        ASSERT_EQ(r.raw_err, std::fabs(r.exact - r.approx));
    }
    EXPECT_EQ(flags, 2);
    EXPECT_NEAR(rows.front().raw_err, std::fabs(div_spectral_bernoulli(16, 2) - theta_plain(2, 16) / 2), 1e-16);
    EXPECT_THROW(audit_theta_uniform({}), domain_error);
}

TEST(Audit, ThreadCountDoesNotChangeRows) {
    const auto a = audit_theta_uniform({200}, 1, 1);
    const auto b = audit_theta_uniform({200}, 1, 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].scaled_err, b[i].scaled_err);
}

TEST(Audit, SmallDivisor) {
    const auto a = audit_small_divisor(10000, SmallDivisorMode::alpha, 2.0, 0.1);
    EXPECT_LE(a.sup_err, std::pow(1e4, -1.9));
    EXPECT_TRUE(a.within_envelope);
    EXPECT_LT(a.sum_small, 3.0);
    const auto b = audit_small_divisor(400, SmallDivisorMode::binomial, 0.5);
    EXPECT_TRUE(b.within_envelope);
    for (uint64_t n = 16; n <= 200; n += 2) EXPECT_LE(std::fabs(div_spectral_bernoulli(n, 2) - 0.5), std::exp(-2.0 * n / 4));
    EXPECT_THROW(audit_small_divisor(8, SmallDivisorMode::alpha, 2.0), domain_error);
}

TEST(Audit, RademacherDivRowsFinite) {
    const auto rows = audit_rademacher_div(1000, 1.0, 200);
    ASSERT_FALSE(rows.empty());
    for (const auto& r : rows) {
        ASSERT_EQ(r.d % 2, 0);
        ASSERT_TRUE(std::isfinite(r.scaled_err));
    }
}

TEST(Audit, CramerDiv) {
    const auto t = audit_cramer_div(3, 1);
    EXPECT_EQ(t.report.exact, 1.0);
    EXPECT_EQ(t.report.theta_over_d, 1.0);
    const auto a = audit_cramer_div(5000, 2);
    EXPECT_NEAR(a.report.exact, 0.5 * (1 + cramer_charfn(5000, 0.5).value.real()), 1e-12);
    EXPECT_NEAR(a.report.spectral, a.report.exact, 1e-12);
    const auto b = audit_cramer_div(5000, 3, 2.0);
    EXPECT_TRUE(std::isfinite(b.scaled_err));
    EXPECT_THROW(audit_cramer_div(cramer_capacity + 1, 3), capacity_error);
}

TEST(Audit, CramerSpectralIdentity) {
    for (uint64_t d : {2u, 3u, 5u, 7u, 11u}) {
        const auto a = audit_cramer_div(2000, d);
        EXPECT_NEAR(a.report.spectral, a.report.exact, 1e-9);
    }
}

TEST(Audit, ModUniformity) {
    const auto b = audit_mod_uniformity(ModelSpec::bernoulli(100), 2);
    EXPECT_LE(b.exact_sup, std::exp(-50.0));
    EXPECT_EQ(audit_mod_uniformity(ModelSpec::bernoulli(100), 1).exact_sup, 0.0);
    const auto c = audit_mod_uniformity(ModelSpec::cramer(10000), 7, nullptr, 0.5, 1.6);
    EXPECT_LE(c.exact_sup, c.saud_bound);
    EXPECT_GT(c.hn_bound, 0.0);
}

TEST(Audit, DmuConstantFinite) {
    const double c = theta_dmu_constant(512);
    EXPECT_TRUE(std::isfinite(c));
    EXPECT_GT(c, 0.0);
}
