#pragma once

#include "common.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace walkarith {

inline constexpr uint64_t sieve_max = 100'000'000;
inline constexpr uint64_t infinite_factor = std::numeric_limits<uint64_t>::max();

using factorization = std::vector<std::pair<uint64_t, unsigned>>;

class ArithCache {
public:
    explicit ArithCache(uint64_t N) : N_(N) {
        if (N < 2 || N > sieve_max) throw capacity_error("sieve bound must lie in [2, 1e8], got " + std::to_string(N));
        spf_.assign(N + 1, 0);
        mobius_.assign(N + 1, 0);
        totient_.assign(N + 1, 0);
        mobius_[1] = 1;
        totient_[1] = 1;
        std::vector<uint8_t> composite(N + 1, 0);
        for (uint64_t i = 2; i <= N; ++i) {
            if (!composite[i]) {
                primes_.push_back(static_cast<uint32_t>(i));
                mobius_[i] = -1;
                totient_[i] = static_cast<uint32_t>(i - 1);
            }
            const uint64_t pi_ = spf_of(i);
            for (uint32_t p : primes_) {
                const uint64_t q = p * i;
                if (q > N || p > pi_) break;
                composite[q] = 1;
                spf_[q] = static_cast<uint16_t>(p);
                if (p == pi_) {
                    mobius_[q] = 0;
                    totient_[q] = totient_[i] * p;
                    break;
                }
                mobius_[q] = static_cast<int8_t>(-mobius_[i]);
                totient_[q] = totient_[i] * (p - 1);
            }
        }
    }

    uint64_t bound() const { return N_; }
    const std::vector<uint32_t>& primes() const { return primes_; }

    // Smallest prime factor; spf(p) = p for primes.
    uint64_t spf(uint64_t n) const {
        check(n);
        return spf_of(n);
    }
    bool is_prime(uint64_t n) const { return n >= 2 && n <= N_ && spf_[n] == 0; }
    int mu(uint64_t n) const { return check(n), mobius_[n]; }
    uint64_t phi(uint64_t n) const { return check(n), totient_[n]; }

    factorization factorize(uint64_t n) const {
        check(n);
        factorization f;
        while (n > 1) {
            const uint64_t p = spf_of(n);
            unsigned e = 0;
            while (n % p == 0) n /= p, ++e;
            f.emplace_back(p, e);
        }
        return f;
    }

    unsigned omega(uint64_t n) const { return static_cast<unsigned>(factorize(n).size()); }
    unsigned omega_with_multiplicity(uint64_t n) const {
        unsigned s = 0;
        for (auto [p, e] : factorize(n)) s += e;
        return s;
    }
    // Sum of the distinct prime divisors.
    uint64_t omega_big_sum(uint64_t n) const {
        uint64_t s = 0;
        for (auto [p, e] : factorize(n)) s += p;
        return s;
    }
    uint64_t divisor_count(uint64_t n) const {
        uint64_t c = 1;
        for (auto [p, e] : factorize(n)) c *= e + 1;
        return c;
    }
    // sigma_s(n) = sum_{d|n} d^s.
    double sigma(uint64_t n, double s) const {
        double r = 1.0;
        for (auto [p, e] : factorize(n)) {
            double term = 1.0, pw = 1.0;
            const double ps = std::pow(static_cast<double>(p), s);
            for (unsigned i = 0; i < e; ++i) pw *= ps, term += pw;
            r *= term;
        }
        return r;
    }
    std::vector<uint64_t> divisors(uint64_t n) const {
        std::vector<uint64_t> ds{1};
        for (auto [p, e] : factorize(n)) {
            const std::size_t cur = ds.size();
            uint64_t pw = 1;
            for (unsigned i = 0; i < e; ++i) {
                pw *= p;
                for (std::size_t j = 0; j < cur; ++j) ds.push_back(ds[j] * pw);
            }
        }
        std::sort(ds.begin(), ds.end());
        return ds;
    }
    // P^-(1) is reported as infinite_factor.
    uint64_t p_minus(uint64_t n) const { return n == 1 ? (check(n), infinite_factor) : spf(n); }
    uint64_t p_plus(uint64_t n) const {
        auto f = factorize(n);
        return f.empty() ? 1 : f.back().first;
    }
    static unsigned valuation(uint64_t n, uint64_t p) {
        unsigned e = 0;
        while (n != 0 && n % p == 0) n /= p, ++e;
        return e;
    }
    // Psi(x, y): #{1 <= m <= x : P^+(m) <= y}.
    uint64_t smooth_count(uint64_t x, uint64_t y) const {
        uint64_t c = 0;
        for (uint64_t m = 1; m <= x; ++m)
            if (p_plus(m) <= y) ++c;
        return c;
    }
    uint64_t prime_pi(uint64_t x) const {
        check(std::max<uint64_t>(x, 1));
        return static_cast<uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
    }
    // flags[n] = 1 when n is k-free, n in 0..N; 0 is never k-free.
    std::vector<uint8_t> kfree_flags(unsigned k) const {
        if (k < 2) throw domain_error("k-free needs k >= 2");
        std::vector<uint8_t> flags(N_ + 1, 1);
        flags[0] = 0;
        for (uint32_t p : primes_) {
            unsigned __int128 pk = 1;
            for (unsigned i = 0; i < k && pk <= N_; ++i) pk *= p;
            if (pk > N_) break;
            for (uint64_t m = static_cast<uint64_t>(pk); m <= N_; m += static_cast<uint64_t>(pk)) flags[m] = 0;
        }
        return flags;
    }

private:
    void check(uint64_t n) const {
        if (n == 0 || n > N_) throw capacity_error("value " + std::to_string(n) + " outside sieve range 1.." + std::to_string(N_));
    }
    uint64_t spf_of(uint64_t n) const { return spf_[n] == 0 ? n : spf_[n]; }

    uint64_t N_;
    std::vector<uint16_t> spf_;  // 0 marks a prime
    std::vector<int8_t> mobius_;
    std::vector<uint32_t> totient_;
    std::vector<uint32_t> primes_;
};

inline ArithCache sieve_build(uint64_t N) { return ArithCache(N); }

struct Constants {
    double euler_gamma = boost::math::constants::euler<double>();
    std::array<double, 11> zeta_values{};  // zeta_values[k] for k = 2..10
    double mertens_factor = std::exp(-boost::math::constants::euler<double>());
    double rademacher_s = 0.0;
    double rademacher_s_tail_bound = 0.0;

    Constants() {
        for (int k = 2; k <= 10; ++k) zeta_values[k] = boost::math::zeta(static_cast<double>(k));
        // s = 2 sum_{j in Z} exp(-2 pi^2 j^2); tail beyond J bounded by 2*3*exp(-a(J+1)^2).
        const double a = 2.0 * pi * pi;
        double sum = 1.0;
        int j = 1;
        for (; j < 10; ++j) {
            const double t = std::exp(-a * j * j);
            sum += 2.0 * t;
            if (6.0 * std::exp(-a * (j + 1.0) * (j + 1.0)) < 1e-300) break;
        }
        rademacher_s = 2.0 * sum;
        rademacher_s_tail_bound = 2.0 * 6.0 * std::exp(-a * (j + 1.0) * (j + 1.0));
    }
    double zeta(int k) const {
        if (k < 2 || k > 10) throw domain_error("zeta table covers k = 2..10");
        return zeta_values[k];
    }
};

inline const Constants& constants() {
    static const Constants c;
    return c;
}

// D_{1/2} = prod p^{floor(v_p(D)/2)}.
inline uint64_t d_half(uint64_t D, const ArithCache& cache) {
    uint64_t r = 1;
    for (auto [p, e] : cache.factorize(D))
        for (unsigned i = 0; i < e / 2; ++i) r *= p;
    return r;
}

// #{1 <= y <= D : D | y^2 + k y}.
inline uint64_t rho_k_bruteforce(uint64_t k, uint64_t D) {
    if (D == 0) throw domain_error("rho_k needs D >= 1");
    if (D > 1'000'000) throw capacity_error("rho_k brute force limited to D <= 1e6");
    const uint64_t km = k % D;
    uint64_t c = 0;
    for (uint64_t y = 1; y <= D; ++y) {
        const uint64_t ym = y % D;
        if ((ym * ((ym + km) % D)) % D == 0) ++c;
    }
    return c;
}

// Closed form: D_{1/2} for k = 0, else 2^{#{p|D : v_p(k) < v_p(D)/2}} gcd(k, D_{1/2}).
inline uint64_t rho_k_formula(uint64_t k, uint64_t D, const ArithCache& cache) {
    if (D == 0) throw domain_error("rho_k needs D >= 1");
    if (D == 1) return 1;
    uint64_t r = 1;
    for (auto [p, e] : cache.factorize(D)) {
        const unsigned half = e / 2;
        if (k == 0) {
            for (unsigned i = 0; i < half; ++i) r *= p;
            continue;
        }
        const unsigned vk = ArithCache::valuation(k, p);
        if (2 * vk < e) r *= 2;
        for (unsigned i = 0; i < std::min(vk, half); ++i) r *= p;
    }
    return r;
}

// The closed form exactly as printed: the power of 2 counts only primes with
// 1 <= v_p(k) < v_p(D)/2. Disagrees with the count when some p | D has p not dividing k.
inline uint64_t rho_k_formula_literal(uint64_t k, uint64_t D, const ArithCache& cache) {
    if (D == 0) throw domain_error("rho_k needs D >= 1");
    const uint64_t dh = d_half(D, cache);
    if (k == 0) return dh;
    uint64_t r = std::gcd(k, dh);
    for (auto [p, e] : cache.factorize(D)) {
        const unsigned vk = ArithCache::valuation(k, p);
        if (vk >= 1 && 2 * vk < e) r *= 2;
    }
    return r;
}

// sum_{[d,delta] <= N} 1/[d,delta]^sigma = sum_{L <= N} d(L^2)/L^sigma.
inline double lcm_power_sum(uint64_t N, double sigma, const ArithCache& cache) {
    if (!(sigma > 0.0)) throw domain_error("lcm_power_sum needs sigma > 0");
    if (N > 1'000'000) throw capacity_error("lcm_power_sum limited to N <= 1e6");
    if (N > cache.bound()) throw capacity_error("sieve too small for lcm_power_sum");
    kahan_sum s;
    for (uint64_t L = 1; L <= N; ++L) {
        uint64_t dl2 = 1;
        for (auto [p, e] : cache.factorize(L)) dl2 *= 2 * e + 1;
        s.add(static_cast<double>(dl2) * std::pow(static_cast<double>(L), -sigma));
    }
    return s.value();
}

inline double lcm_power_sum_bruteforce(uint64_t N, double sigma) {
    kahan_sum s;
    for (uint64_t d = 1; d <= N; ++d)
        for (uint64_t e = 1; e <= N; ++e) {
            const uint64_t l = std::lcm(d, e);
            if (l <= N) s.add(std::pow(static_cast<double>(l), -sigma));
        }
    return s.value();
}

// f(x) = sum_{n <= T} mu(n) g(n x).
inline double mobius_invert_truncated(const std::function<double(uint64_t)>& g, uint64_t x, uint64_t T,
                                      const ArithCache& cache) {
    if (T > cache.bound()) throw capacity_error("truncation bound exceeds sieve");
    kahan_sum s;
    for (uint64_t n = 1; n <= T; ++n) {
        const int m = cache.mu(n);
        if (m != 0) s.add(m * g(n * x));
    }
    return s.value();
}

// sum_{m <= T} f(m x) with f the truncated inversion; recovers g(x) as T grows.
inline double mobius_forward_check(const std::function<double(uint64_t)>& g, uint64_t x, uint64_t T,
                                   const ArithCache& cache) {
    kahan_sum s;
    for (uint64_t m = 1; m <= T; ++m) s.add(mobius_invert_truncated(g, m * x, T / m, cache));
    return s.value();
}

struct ZarembaValues {
    double phi = 0.0;  // sum_{d|n} log d / d
    double psi = 0.0;  // sum_{d|n, d>=3} log d loglog d / d
};

inline ZarembaValues erdos_zaremba(uint64_t n, const ArithCache& cache) {
    ZarembaValues z;
    for (uint64_t d : cache.divisors(n)) {
        const double ld = std::log(static_cast<double>(d));
        z.phi += ld / d;
        if (d >= 3) z.psi += ld * std::log(ld) / d;
    }
    return z;
}

}  // namespace walkarith
