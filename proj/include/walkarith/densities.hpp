#pragma once

#include "arith.hpp"
#include "common.hpp"
#include "walkdist.hpp"

#include <functional>
#include <string>
#include <vector>

namespace walkarith {

struct IntegerSet {
    std::string name;
    std::vector<uint8_t> member;  // membership over 0..max()

    uint64_t max() const { return member.empty() ? 0 : member.size() - 1; }
    bool contains(uint64_t v) const {
        if (v >= member.size()) throw domain_error("value " + std::to_string(v) + " beyond the range of set " + name);
        return member[v] != 0;
    }

    static IntegerSet all(uint64_t N) { return {"all", std::vector<uint8_t>(N + 1, 1)}; }
    static IntegerSet evens(uint64_t N) {
        IntegerSet s{"evens", std::vector<uint8_t>(N + 1, 0)};
        for (uint64_t v = 0; v <= N; v += 2) s.member[v] = 1;
        return s;
    }
    static IntegerSet primes(const ArithCache& cache) {
        IntegerSet s{"primes", std::vector<uint8_t>(cache.bound() + 1, 0)};
        for (auto p : cache.primes()) s.member[p] = 1;
        return s;
    }
    static IntegerSet kfree(unsigned k, const ArithCache& cache) { return {"kfree" + std::to_string(k), cache.kfree_flags(k)}; }
    // y-smooth positive integers.
    static IntegerSet smooth(uint64_t y, const ArithCache& cache) {
        IntegerSet s{"smooth" + std::to_string(y), std::vector<uint8_t>(cache.bound() + 1, 0)};
        for (uint64_t v = 1; v <= cache.bound(); ++v) s.member[v] = cache.p_plus(v) <= y;
        return s;
    }
    static IntegerSet custom(const std::vector<uint64_t>& values, uint64_t N) {
        IntegerSet s{"custom", std::vector<uint8_t>(N + 1, 0)};
        for (auto v : values) {
            if (v > N) throw domain_error("custom set value beyond declared range");
            s.member[v] = 1;
        }
        return s;
    }
};

struct DensitySuite {
    double cesaro = 0.0;  // #{1 <= j <= n : j in A}/n
    double euler = 0.0;   // sum_{j in A} C(n,j) rho^j (1-rho)^{n-j}
    double borel = 0.0;   // e^{-t} sum_{j in A} t^j/j!, tail cut at 12 sd
    double window = 0.0;  // share of A in [n, n + eps sqrt n)
};

inline double poisson_mass_in(const IntegerSet& A, double t) {
    if (t <= 0) return A.contains(0) ? 1.0 : 0.0;
    const double sd = std::sqrt(t);
    const auto lo = static_cast<uint64_t>(std::max(0.0, std::floor(t - 12 * sd - 1)));
    const auto hi = static_cast<uint64_t>(std::ceil(t + 12 * sd + 1));
    kahan_sum s;
    for (uint64_t j = lo; j <= hi; ++j)
        if (A.contains(j)) s.add(std::exp(static_cast<double>(j) * std::log(t) - t - std::lgamma(static_cast<double>(j) + 1)));
    return s.value();
}

inline DensitySuite density_suite(const IntegerSet& A, uint64_t n, double rho, double t, double eps = 1.0) {
    if (n < 1) throw domain_error("n must be positive");
    DensitySuite r;
    uint64_t c = 0;
    for (uint64_t j = 1; j <= n; ++j) c += A.contains(j);
    r.cesaro = static_cast<double>(c) / static_cast<double>(n);
    const auto p = pmf_exact(ModelSpec::bernoulli(n, rho), false);
    kahan_sum e;
    for (uint64_t j = 0; j <= n; ++j)
        if (p.probs[j] != 0.0 && A.contains(j)) e.add(p.probs[j]);
    r.euler = e.value();
    r.borel = poisson_mass_in(A, t);
    const double top = static_cast<double>(n) + eps * std::sqrt(static_cast<double>(n));
    uint64_t in = 0, tot = 0;
    for (uint64_t j = n; static_cast<double>(j) < top; ++j) ++tot, in += A.contains(j);
    r.window = tot ? static_cast<double>(in) / static_cast<double>(tot) : 0.0;
    return r;
}

// (E_rho a)_n = sum_j C(n,j) rho^j (1-rho)^{n-j} a_j for n = 0..nmax; a_j = 0 beyond a.size().
inline std::vector<double> euler_means(const std::vector<double>& a, double rho, uint64_t nmax) {
    std::vector<double> out(nmax + 1, 0.0);
    for (uint64_t n = 0; n <= nmax; ++n) {
        const uint64_t jmax = std::min<uint64_t>(n, a.empty() ? 0 : a.size() - 1);
        if (a.empty()) break;
        if (n == 0) {
            out[0] = a[0];
            continue;
        }
        const auto p = binomial_probs(n, rho);
        kahan_sum s;
        for (uint64_t j = 0; j <= jmax; ++j)
            if (a[j] != 0.0) s.add(p[j] * a[j]);
        out[n] = s.value();
    }
    return out;
}

struct HardyCheck {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = sum_n (E_rho a)_n^p, rhs = rho^{-1} sum a_n^p; a finitely supported.
inline HardyCheck hardy_lp_check(const std::vector<double>& a, double rho, double p) {
    if (!(p > 1) || !(rho > 0 && rho < 1)) throw domain_error("need p > 1 and 0 < rho < 1");
    HardyCheck r;
    kahan_sum rhs;
    uint64_t last = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0) throw domain_error("Hardy check needs a nonnegative sequence");
        if (a[i] > 0) last = i;
        rhs.add(std::pow(a[i], p));
    }
    r.rhs = rhs.value() / rho;
    if (r.rhs == 0) return r;
    // Past n = 2(last+1)/rho the Euler means decay geometrically, so a relative cut is safe.
    std::vector<double> logfact{0.0};
    auto lf = [&](uint64_t k) {
        while (logfact.size() <= k) logfact.push_back(logfact.back() + std::log(static_cast<double>(logfact.size())));
        return logfact[k];
    };
    const double lr = std::log(rho), lq = std::log1p(-rho);
    kahan_sum lhs;
    for (uint64_t n = 0;; ++n) {
        const double nd = static_cast<double>(n);
        const double sd = std::sqrt(nd * rho * (1 - rho));
        const double lo = std::max(0.0, nd * rho - 40 * sd - 40);
        const uint64_t jmax = std::min<uint64_t>(n, last);
        kahan_sum s;
        for (uint64_t j = static_cast<uint64_t>(lo); j <= jmax; ++j) {
            if (a[j] == 0.0) continue;
            const double jd = static_cast<double>(j);
            s.add(std::exp(lf(n) - lf(j) - lf(n - j) + jd * lr + (nd - jd) * lq) * a[j]);
        }
        const double term = std::pow(s.value(), p);
        lhs.add(term);
        if (nd > 2.0 * static_cast<double>(last + 1) / rho + 50 && term <= 1e-18 * rho * lhs.value()) break;
        if (n > 100'000'000) throw truncation_error("Hardy sum did not converge");
    }
    r.lhs = lhs.value();
    return r;
}

struct EulerBoundCheck {
    double lhs = 0.0;
    double bound = 0.0;
};

// lhs = |sum_h 2^{-n} C(n,h) a_h|, bound = (C/sqrt n) max_l |a_0 + ... + a_l|.
inline EulerBoundCheck euler_transform_bound_check(const std::vector<double>& a, uint64_t n, double C = 3.0) {
    if (a.size() < n + 1) throw domain_error("sequence must be defined on 0..n");
    if (n < 1) throw domain_error("n must be positive");
    const auto p = binomial_probs(n, 0.5);
    kahan_sum s, partial;
    double amax = 0.0;
    for (uint64_t h = 0; h <= n; ++h) {
        s.add(p[h] * a[h]);
        partial.add(a[h]);
        amax = std::max(amax, std::fabs(partial.value()));
    }
    return {std::fabs(s.value()), C / std::sqrt(static_cast<double>(n)) * amax};
}

// Exact E f(B_j), j = 0..n, for f given on 0..n (B_0 = 0).
inline std::vector<rational> binomial_expectations(const std::vector<rational>& f, uint64_t n) {
    if (f.size() < n + 1) throw domain_error("f must be given on 0..n");
    std::vector<rational> out(n + 1);
    for (uint64_t j = 0; j <= n; ++j) {
        const auto row = binomial_row(j);
        rational s = 0;
        for (uint64_t k = 0; k <= j; ++k) s += rational(row[k]) * f[k];
        out[j] = s / rational(bigint(1) << j);
    }
    return out;
}

// (2^j E f(B_j))_j = (sum_k C(j,k) f(k))_j.
inline std::vector<rational> pascal_forward(const std::vector<rational>& f, uint64_t n) {
    auto e = binomial_expectations(f, n);
    for (uint64_t j = 0; j <= n; ++j) e[j] *= rational(bigint(1) << j);
    return e;
}

inline constexpr uint64_t pascal_capacity = 64;

// f(i) = sum_{j=0}^i (-1)^{i-j} C(i,j) 2^j E f(B_j).
inline rational pascal_invert(const std::vector<rational>& Ef, uint64_t i) {
    if (i > pascal_capacity) throw capacity_error("Pascal inversion limited to i <= 64");
    if (Ef.size() < i + 1) throw domain_error("need E f(B_j) for j = 0..i");
    const auto row = binomial_row(i);
    rational s = 0;
    for (uint64_t j = 0; j <= i; ++j) {
        const rational t = rational(row[j] << j) * Ef[j];
        if ((i - j) % 2) s -= t;
        else s += t;
    }
    return s;
}

// The weights as printed: sum_{j=1}^i (-1)^{i-j} 2^j C(i-1, j-1) E f(B_j). Fails f = id at i = 2.
inline rational pascal_invert_literal(const std::vector<rational>& Ef, uint64_t i) {
    if (i < 1 || i > pascal_capacity) throw domain_error("literal Pascal weights need 1 <= i <= 64");
    if (Ef.size() < i + 1) throw domain_error("need E f(B_j) for j = 0..i");
    const auto row = binomial_row(i - 1);
    rational s = 0;
    for (uint64_t j = 1; j <= i; ++j) {
        const rational t = rational(row[j - 1] << j) * Ef[j];
        if ((i - j) % 2) s -= t;
        else s += t;
    }
    return s;
}

struct KubiliusCompare {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double error_scale = 0.0;  // x^{-c} + e^{-u log u}, u = log x / log r
};

// omega_r(m) = (omega(m,1), ..., omega(m,r)), omega(m,t) = #{p <= t : p | m}.
inline KubiliusCompare kubilius_compare(uint64_t x, uint64_t r, const std::function<bool(const std::vector<int>&)>& Q,
                                        const ArithCache& cache, double c = 0.5) {
    if (x > 1'000'000) throw capacity_error("Kubilius comparison limited to x <= 1e6");
    if (r < 2 || r > x) throw domain_error("need 2 <= r <= x");
    std::vector<uint64_t> ps;
    for (auto p : cache.primes()) {
        if (p > r) break;
        ps.push_back(p);
    }
    if (ps.size() > 20) throw capacity_error("Kubilius comparison enumerates 2^pi(r) patterns; pi(r) <= 20");
    const std::size_t patterns = std::size_t{1} << ps.size();
    auto vec_of = [&](std::size_t mask) {
        std::vector<int> v(r, 0);
        int cnt = 0;
        std::size_t pi_ = 0;
        for (uint64_t t = 1; t <= r; ++t) {
            while (pi_ < ps.size() && ps[pi_] == t) cnt += (mask >> pi_) & 1, ++pi_;
            v[t - 1] = cnt;
        }
        return v;
    };
    std::vector<uint64_t> counts(patterns, 0);
    for (uint64_t m = 1; m <= x; ++m) {
        std::size_t mask = 0;
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (m % ps[i] == 0) mask |= std::size_t{1} << i;
        ++counts[mask];
    }
    KubiliusCompare k;
    kahan_sum lhs, rhs;
    for (std::size_t mask = 0; mask < patterns; ++mask) {
        if (!Q(vec_of(mask))) continue;
        lhs.add(static_cast<double>(counts[mask]));
        double pr = 1.0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const double q = 1.0 / static_cast<double>(ps[i]);
            pr *= (mask >> i) & 1 ? q : 1 - q;
        }
        rhs.add(pr);
    }
    k.lhs = lhs.value() / static_cast<double>(x);
    k.rhs = rhs.value();
    k.gap = std::fabs(k.lhs - k.rhs);
    const double u = std::log(static_cast<double>(x)) / std::log(static_cast<double>(r));
    k.error_scale = std::pow(static_cast<double>(x), -c) + std::exp(-u * std::log(u));
    return k;
}

}  // namespace walkarith
