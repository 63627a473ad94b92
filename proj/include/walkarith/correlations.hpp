#pragma once

#include "arith.hpp"
#include "common.hpp"
#include "divprob.hpp"
#include "walkdist.hpp"

#include <complex>
#include <numeric>
#include <vector>

namespace walkarith {

// P{W = s mod q} for s = 0..q-1.
inline std::vector<double> residue_law(const ExactPMF& pmf, uint64_t q) {
    std::vector<kahan_sum> acc(q);
    const auto qi = static_cast<int64_t>(q);
    for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
        if (pmf.probs[i] == 0.0) continue;
        acc[static_cast<std::size_t>(mod_floor(pmf.support_min + static_cast<int64_t>(i), qi))].add(pmf.probs[i]);
    }
    std::vector<double> out(q);
    for (uint64_t s = 0; s < q; ++s) out[s] = acc[s].value();
    return out;
}

inline std::vector<double> binomial_residue_law(uint64_t g, uint64_t q) {
    if (g == 0) {
        std::vector<double> out(q, 0.0);
        out[0] = 1.0;
        return out;
    }
    return residue_law(pmf_exact(ModelSpec::bernoulli(g)), q);
}

// P{d | B_n, delta | B_m} for fixed n, d, delta and any m > n, through the
// residues of B_n mod delta restricted to d | B_n.
class JointDivEngine {
public:
    JointDivEngine(const ExactPMF& pmf_n, uint64_t d, uint64_t delta) : d_(d), delta_(delta), q_(delta, 0.0) {
        if (d == 0 || delta == 0) throw domain_error("moduli must be positive");
        std::vector<kahan_sum> acc(delta);
        kahan_sum marg;
        for (std::size_t i = 0; i < pmf_n.probs.size(); ++i) {
            const int64_t a = pmf_n.support_min + static_cast<int64_t>(i);
            if (mod_floor(a, static_cast<int64_t>(d)) != 0) continue;
            acc[static_cast<std::size_t>(mod_floor(a, static_cast<int64_t>(delta)))].add(pmf_n.probs[i]);
            marg.add(pmf_n.probs[i]);
        }
        for (uint64_t r = 0; r < delta; ++r) q_[r] = acc[r].value();
        marginal_n_ = marg.value();
    }

    // gap_law[s] = P{B_{m-n} = s mod delta}.
    double joint(const std::vector<double>& gap_law) const {
        kahan_sum s;
        for (uint64_t r = 0; r < delta_; ++r) s.add(q_[r] * gap_law[(delta_ - r) % delta_]);
        return s.value();
    }
    double marginal_n() const { return marginal_n_; }

private:
    uint64_t d_, delta_;
    std::vector<double> q_;
    double marginal_n_ = 0.0;
};

inline double joint_div_exact(uint64_t n, uint64_t m, uint64_t d, uint64_t delta) {
    if (n < 1 || m <= n) throw domain_error("need 1 <= n < m");
    const JointDivEngine eng(pmf_exact(ModelSpec::bernoulli(n)), d, delta);
    return eng.joint(binomial_residue_law(m - n, delta));
}

struct JointDivReport {
    double joint_exact = 0.0;
    double product_of_marginals = 0.0;
    double delta_spectral = 0.0;
    double delta_exact() const { return joint_exact - product_of_marginals; }
};

// Correlation sum, with the inner j-sum collapsed for fixed (n, d, delta):
// Delta(n,m) = (1/(d delta)) sum_h e^{i pi h m/delta} cos^{m-n}(pi h/delta) S_h(n),
// S_h(n) = sum_j e^{i pi j n/d} (cos^n(pi(j/d + h/delta)) - cos^n(pi j/d) cos^n(pi h/delta)).
class DeltaSpectral {
public:
    DeltaSpectral(uint64_t n, uint64_t d, uint64_t delta) : n_(n), d_(d), delta_(delta), S_(delta, {0.0, 0.0}) {
        if (d == 0 || delta == 0) throw domain_error("moduli must be positive");
        const double dd = static_cast<double>(d), ed = static_cast<double>(delta);
        for (uint64_t h = 1; h < delta; ++h) {
            std::complex<double> acc{0.0, 0.0};
            const double ch = power(std::cos(pi * static_cast<double>(h) / ed), n);
            for (uint64_t j = 1; j < d; ++j) {
                const double x = static_cast<double>(j) / dd + static_cast<double>(h) / ed;
                const double term = power(std::cos(pi * x), n) - power(std::cos(pi * static_cast<double>(j) / dd), n) * ch;
                const auto r = static_cast<uint64_t>((static_cast<unsigned __int128>(j) * n) % (2 * d));
                acc += std::polar(term, pi * static_cast<double>(r) / dd);
            }
            S_[h] = acc;
        }
    }

    std::complex<double> eval_complex(uint64_t m) const {
        if (m <= n_) throw domain_error("need m > n");
        const double ed = static_cast<double>(delta_);
        std::complex<double> acc{0.0, 0.0};
        for (uint64_t h = 1; h < delta_; ++h) {
            const double c = power(std::cos(pi * static_cast<double>(h) / ed), m - n_);
            if (c == 0.0) continue;
            const auto r = static_cast<uint64_t>((static_cast<unsigned __int128>(h) * m) % (2 * delta_));
            acc += std::polar(c, pi * static_cast<double>(r) / ed) * S_[h];
        }
        return acc / (static_cast<double>(d_) * ed);
    }
    double eval(uint64_t m) const { return eval_complex(m).real(); }

    // c^e as sign * exp(e log|c|).
    static double power(double c, uint64_t e) {
        if (e == 0) return 1.0;
        if (c == 0.0) return 0.0;
        const double l = static_cast<double>(e) * std::log(std::fabs(c));
        if (l < exp_underflow) return 0.0;
        const double v = std::exp(l);
        return (c < 0 && (e & 1)) ? -v : v;
    }

private:
    uint64_t n_, d_, delta_;
    std::vector<std::complex<double>> S_;
};

inline double delta_spectral(uint64_t n, uint64_t m, uint64_t d, uint64_t delta) {
    const auto z = DeltaSpectral(n, d, delta).eval_complex(m);
    if (std::fabs(z.imag()) > 1e-10) throw std::logic_error("correlation sum has a non-negligible imaginary part");
    return z.real();
}

inline JointDivReport joint_div_report(uint64_t n, uint64_t m, uint64_t d, uint64_t delta) {
    JointDivReport r;
    r.joint_exact = joint_div_exact(n, m, d, delta);
    r.product_of_marginals = div_exact(ModelSpec::bernoulli(n), d) * div_exact(ModelSpec::bernoulli(m), delta);
    r.delta_spectral = delta_spectral(n, m, d, delta);
    return r;
}

struct MixingScan {
    std::vector<uint64_t> gaps;
    std::vector<double> abs_delta;
    bool decreasing_trend = false;  // last < first
};

inline MixingScan mixing_scan(uint64_t d, uint64_t delta, uint64_t n, const std::vector<uint64_t>& gaps) {
    MixingScan s;
    const DeltaSpectral ds(n, d, delta);
    for (uint64_t g : gaps) {
        if (g == 0) throw domain_error("gaps must be positive");
        s.gaps.push_back(g);
        s.abs_delta.push_back(std::fabs(ds.eval(n + g)));
    }
    s.decreasing_trend = s.abs_delta.size() >= 2 && s.abs_delta.back() < s.abs_delta.front();
    return s;
}

// P{D | B_n B_m} through residues of B_n and B_{m-n} mod D.
inline double product_div_exact(uint64_t n, uint64_t m, uint64_t D) {
    if (n < 1 || m <= n) throw domain_error("need 1 <= n < m");
    if (D == 0) throw domain_error("D must be positive");
    if (D == 1) return 1.0;
    if (static_cast<double>(n) * static_cast<double>(D) * static_cast<double>(D) > 1e9)
        throw capacity_error("product divisibility guard n D^2 <= 1e9 exceeded");
    const auto a = residue_law(pmf_exact(ModelSpec::bernoulli(n)), D);
    const auto k = binomial_residue_law(m - n, D);
    kahan_sum s;
    for (uint64_t r = 0; r < D; ++r)
        for (uint64_t t = 0; t < D; ++t)
            if ((r * ((r + t) % D)) % D == 0) s.add(a[r] * k[t]);
    return s.value();
}

struct ProductMainTerm {
    double main = 0.0;
    double eps_bound = 0.0;  // (D^{1+eps}/n)^{1/2}
};

// (1/(D 2^{m-n})) sum_k C(m-n,k) rho_k(D); exact for gaps <= 64, residue-grouped above.
inline ProductMainTerm product_div_mainterm(uint64_t n, uint64_t m, uint64_t D, const ArithCache& cache,
                                           double eps = 0.1) {
    if (n < 1 || m <= n) throw domain_error("need 1 <= n < m");
    const uint64_t g = m - n;
    ProductMainTerm r;
    if (g <= 64) {
        const auto row = binomial_row(g);
        bigint s = 0;
        for (uint64_t k = 0; k <= g; ++k) s += row[k] * rho_k_formula(k, D, cache);
        r.main = to_double(rational(s, bigint(D) << g));
    } else {
        const auto law = binomial_residue_law(g, D);
        kahan_sum s;
        for (uint64_t t = 0; t < D; ++t) s.add(law[t] * static_cast<double>(rho_k_formula(t, D, cache)));
        r.main = s.value() / static_cast<double>(D);
    }
    r.eps_bound = std::sqrt(std::pow(static_cast<double>(D), 1 + eps) / static_cast<double>(n));
    return r;
}

// sum_{d|D_{1/2}} w(d) d sum_{u|(D_{1/2}/d)} mu(u) P{u d | B_g}.
template <class Weight>
double gcd_weighted_sum(uint64_t g, uint64_t D, const ArithCache& cache, Weight w) {
    const uint64_t dh = d_half(D, cache);
    kahan_sum s;
    for (uint64_t d : cache.divisors(dh)) {
        kahan_sum inner;
        for (uint64_t u : cache.divisors(dh / d)) {
            const int mu = cache.mu(u);
            if (mu != 0) inner.add(mu * (g == 0 ? 1.0 : div_spectral_bernoulli(g, u * d)));
        }
        s.add(w(d) * static_cast<double>(d) * inner.value());
    }
    return s.value();
}

// The bound as printed: weight 2^{omega(d)} on the gcd classes.
inline double product_div_bound(uint64_t n, uint64_t m, uint64_t D, const ArithCache& cache, double c_eps,
                                double eps = 0.1) {
    if (m <= n) throw domain_error("need m > n");
    const uint64_t g = m - n;
    const double Dd = static_cast<double>(D);
    const double s = gcd_weighted_sum(g, D, cache, [&](uint64_t d) { return std::ldexp(1.0, static_cast<int>(cache.omega(d))); });
    return s / Dd + std::ldexp(1.0, -static_cast<int>(std::min<uint64_t>(g, 2000))) / std::sqrt(Dd) +
           c_eps * std::sqrt(std::pow(Dd, 1 + eps) / static_cast<double>(n));
}

// Same shape with 2^{omega(D)}, which dominates rho_k(D) <= 2^{omega(D)} gcd(k, D_{1/2}).
inline double product_div_bound_corrected(uint64_t n, uint64_t m, uint64_t D, const ArithCache& cache,
                                          double c_eps, double eps = 0.1) {
    if (m <= n) throw domain_error("need m > n");
    const uint64_t g = m - n;
    const double Dd = static_cast<double>(D);
    const double w = std::ldexp(1.0, static_cast<int>(cache.omega(D)));
    const double s = gcd_weighted_sum(g, D, cache, [&](uint64_t) { return w; });
    return s / Dd + std::ldexp(1.0, -static_cast<int>(std::min<uint64_t>(g, 2000))) / std::sqrt(Dd) +
           c_eps * std::sqrt(std::pow(Dd, 1 + eps) / static_cast<double>(n));
}

struct CoprimeResult {
    double exact = 0.0;
    double mobius_approx = 0.0;
};

inline constexpr double coprime_pair_capacity = 1e8;

// P{gcd(B_n, B_m) = 1} for m < n, with gcd(0,x) = x.
inline CoprimeResult coprime_prob(uint64_t n, uint64_t m, const ArithCache& cache) {
    if (m < 1 || m >= n) throw domain_error("need 1 <= m < n");
    const uint64_t g = n - m;
    const auto pa = pmf_exact(ModelSpec::bernoulli(m));
    const auto pb = pmf_exact(ModelSpec::bernoulli(g));
    std::vector<uint64_t> as, bs;
    for (uint64_t a = 0; a <= m; ++a)
        if (pa.probs[a] > 0) as.push_back(a);
    for (uint64_t b = 0; b <= g; ++b)
        if (pb.probs[b] > 0) bs.push_back(b);
    if (static_cast<double>(as.size()) * static_cast<double>(bs.size()) > coprime_pair_capacity)
        throw capacity_error("coprime enumeration exceeds 1e8 pairs");
    CoprimeResult r;
    kahan_sum total;
    for (uint64_t a : as) {
        kahan_sum row;
        for (uint64_t b : bs)
            if (std::gcd(a, b) == 1) row.add(pb.probs[b]);
        total.add(pa.probs[a] * row.value());
    }
    r.exact = total.value();
    const uint64_t lim = std::min(m, g);
    if (lim > cache.bound()) throw capacity_error("sieve too small for Mobius window");
    kahan_sum mob;
    for (uint64_t d = 1; d <= lim; ++d) {
        const int mu = cache.mu(d);
        if (mu != 0) mob.add(mu / (static_cast<double>(d) * static_cast<double>(d)));
    }
    r.mobius_approx = mob.value();
    return r;
}

}  // namespace walkarith
