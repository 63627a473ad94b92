#pragma once

#include "arith.hpp"
#include "common.hpp"
#include "divprob.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "walkdist.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <numeric>
#include <vector>

namespace walkarith {

enum class RademacherSign { positive_only, absolute_value };

// P^-(0) = 2, d_n(0) = n, 0 is neither k-free nor quasiprime.
struct PrimeConvention {
    RademacherSign rademacher_sign = RademacherSign::positive_only;
};

inline const char* convention_name(RademacherSign s) {
    return s == RademacherSign::positive_only ? "positive_only" : "absolute_value";
}

inline bool is_prime_value(int64_t v, const PrimeConvention& conv, const ArithCache& cache) {
    if (v < 0) {
        if (conv.rademacher_sign == RademacherSign::positive_only) return false;
        v = -v;
    }
    if (static_cast<uint64_t>(v) > cache.bound()) throw capacity_error("sieve too small for primality lookup");
    return cache.is_prime(static_cast<uint64_t>(v));
}

inline double prime_prob_pmf(const ExactPMF& pmf, const PrimeConvention& conv, const ArithCache& cache) {
    kahan_sum s;
    for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
        const int64_t v = pmf.support_min + static_cast<int64_t>(i);
        if (pmf.probs[i] != 0.0 && is_prime_value(v, conv, cache)) s.add(pmf.probs[i]);
    }
    return s.value();
}

inline double prime_prob_exact(const ModelSpec& model, const PrimeConvention& conv, const ArithCache& cache) {
    return prime_prob_pmf(pmf_exact(model, false), conv, cache);
}

// Exact prime probability as a dyadic rational (Bernoulli(1/2) and Rademacher).
inline rational prime_prob_rational(const ModelSpec& model, const PrimeConvention& conv, const ArithCache& cache) {
    const auto pmf = pmf_exact(model);
    if (!pmf.exact_counts) throw domain_error("rational prime probability needs a dyadic model within count capacity");
    bigint s = 0;
    for (std::size_t i = 0; i < pmf.exact_counts->size(); ++i)
        if (is_prime_value(pmf.support_min + static_cast<int64_t>(i), conv, cache)) s += (*pmf.exact_counts)[i];
    return rational(s, bigint(1) << pmf.denom_exp);
}

struct PminusTail {
    double exact = 0.0;
    double mobius_identity = 0.0;
    double mertens_gap = 0.0;
};

// Everything pminus_tail needs for one horizon n: the pmf and spectral P{d|B_n}, d <= n.
class PminusEngine {
public:
    PminusEngine(uint64_t n, const ArithCache& cache, unsigned threads = 0)
        : n_(n), cache_(cache), pmf_(pmf_exact(ModelSpec::bernoulli(n), false)), pd_(n + 1, 0.0) {
        if (n > cache.bound()) throw capacity_error("sieve too small for horizon");
        parallel_for(
            n, [&](std::size_t i) { pd_[i + 1] = div_spectral_bernoulli(n, i + 1); }, threads);
    }

    double div_prob(uint64_t d) const { return pd_.at(d); }

    PminusTail eval(double y) const {
        if (!(y >= 2)) throw domain_error("pminus_tail needs y >= 2");
        PminusTail r;
        kahan_sum ex;
        for (uint64_t k = 1; k <= n_; ++k) {
            if (pmf_.probs[k] == 0.0) continue;
            if (k == 1 || static_cast<double>(cache_.spf(k)) > y) ex.add(pmf_.probs[k]);
        }
        r.exact = ex.value();
        kahan_sum id;
        for (uint64_t d = 1; d <= n_; ++d) {
            const int mu = cache_.mu(d);
            if (mu == 0 || static_cast<double>(cache_.p_plus(d)) > y) continue;
            id.add(mu * pd_[d]);
        }
        r.mobius_identity = id.value();
        const double ly = std::log(y);
        r.mertens_gap = std::fabs(r.exact - constants().mertens_factor / ly) * ly * ly;
        return r;
    }

    // Contribution of the atom B_n = 0 to the truncated identity: P{B_n=0} sum_{d<=n, d | prod_{p<=y} p} mu(d).
    double zero_atom_term(double y) const {
        long c = 0;
        for (uint64_t d = 1; d <= n_; ++d) {
            const int mu = cache_.mu(d);
            if (mu != 0 && static_cast<double>(cache_.p_plus(d)) <= y) c += mu;
        }
        return pmf_.probs[0] * static_cast<double>(c);
    }

private:
    uint64_t n_;
    const ArithCache& cache_;
    ExactPMF pmf_;
    std::vector<double> pd_;
};

inline PminusTail pminus_tail(uint64_t n, double y, const ArithCache& cache) { return PminusEngine(n, cache).eval(y); }

struct ThetaPrimeFormula {
    double formula = 0.0;
    double exact = 0.0;
    double gap = 0.0;
};

// sum mu(d) Theta(d,n)/d over squarefree d <= n with P^+(d) <= sqrt n.
inline ThetaPrimeFormula prime_prob_theta_formula(uint64_t n, const ArithCache& cache) {
    if (n > 1'000'000) throw capacity_error("Theta prime formula limited to n <= 1e6");
    if (n > cache.bound()) throw capacity_error("sieve too small for horizon");
    ThetaPrimeFormula r;
    const double rn = std::sqrt(static_cast<double>(n));
    kahan_sum s;
    for (uint64_t d = 1; d <= n; ++d) {
        const int mu = cache.mu(d);
        if (mu == 0 || static_cast<double>(cache.p_plus(d)) > rn) continue;
        s.add(mu * theta_plain(d, n) / static_cast<double>(d));
    }
    r.formula = s.value();
    r.exact = prime_prob_exact(ModelSpec::bernoulli(n), {}, cache);
    r.gap = std::fabs(r.formula - r.exact);
    return r;
}

struct KfreeResult {
    double exact = 0.0;
    double zeta_gap = 0.0;
};

inline KfreeResult kfree_prob(uint64_t n, double rho, unsigned k, const ArithCache& cache) {
    if (k < 2 || k > 10) throw domain_error("k-free probability needs 2 <= k <= 10");
    if (n > cache.bound()) throw capacity_error("sieve too small for horizon");
    const auto flags = cache.kfree_flags(k);
    const auto pmf = pmf_exact(ModelSpec::bernoulli(n, rho), false);
    kahan_sum s;
    for (uint64_t v = 0; v <= n; ++v)
        if (flags[v]) s.add(pmf.probs[v]);
    KfreeResult r;
    r.exact = s.value();
    r.zeta_gap = std::fabs(r.exact - 1.0 / constants().zeta(static_cast<int>(k)));
    return r;
}

struct DivisorExpectations {
    double E_d = 0.0;
    double E_sigma_minus1 = 0.0;
    double E_psi = 0.0;
    double E_psi_theta = 0.0;  // sum (log d)(loglog d) Theta(d,n)/d^2
};

inline DivisorExpectations divisor_expectations(uint64_t n, unsigned threads = 0) {
    if (n > 100'000) throw capacity_error("divisor expectations limited to n <= 1e5");
    std::vector<double> pd(n + 1, 0.0), th(n + 1, 0.0);
    parallel_for(
        n,
        [&](std::size_t i) {
            const uint64_t d = i + 1;
            pd[d] = div_spectral_bernoulli(n, d);
            if (d >= 3) th[d] = theta_plain(d, n);
        },
        threads);
    DivisorExpectations r;
    kahan_sum ed, es, ep, et;
    for (uint64_t d = 1; d <= n; ++d) {
        const double dd = static_cast<double>(d);
        ed.add(pd[d]);
        es.add(pd[d] / dd);
        if (d >= 3) {
            const double w = std::log(dd) * std::log(std::log(dd)) / dd;
            ep.add(w * pd[d]);
            et.add(w * th[d] / dd);
        }
    }
    r.E_d = ed.value();
    r.E_sigma_minus1 = es.value();
    r.E_psi = ep.value();
    r.E_psi_theta = et.value();
    return r;
}

// Same expectations from the mass function with truncated-divisor conventions at 0.
inline DivisorExpectations divisor_expectations_exact(uint64_t n, const ArithCache& cache) {
    const auto pmf = pmf_exact(ModelSpec::bernoulli(n), false);
    DivisorExpectations r;
    kahan_sum ed, es, ep;
    {
        kahan_sum h, psi0;
        for (uint64_t d = 1; d <= n; ++d) {
            h.add(1.0 / static_cast<double>(d));
            if (d >= 3) psi0.add(std::log(static_cast<double>(d)) * std::log(std::log(static_cast<double>(d))) / static_cast<double>(d));
        }
        ed.add(pmf.probs[0] * static_cast<double>(n));
        es.add(pmf.probs[0] * h.value());
        ep.add(pmf.probs[0] * psi0.value());
    }
    for (uint64_t k = 1; k <= n; ++k) {
        if (pmf.probs[k] == 0.0) continue;
        ed.add(pmf.probs[k] * static_cast<double>(cache.divisor_count(k)));
        es.add(pmf.probs[k] * cache.sigma(k, -1.0));
        ep.add(pmf.probs[k] * erdos_zaremba(k, cache).psi);
    }
    r.E_d = ed.value();
    r.E_sigma_minus1 = es.value();
    r.E_psi = ep.value();
    return r;
}

struct RademacherPrimeBounds {
    double exact = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double lower_constant = 0.0;  // 4/sqrt(2 e pi)
    double upper_constant = 0.0;  // sqrt(2/pi) sum_k 2^k e^{-2^{2k-1}}
    bool even_n = false;          // R_n even: prime only when |R_n| = 2
};

inline double rademacher_upper_constant() {
    double s = 0.0;
    for (int k = 1; k < 12; ++k) s += std::ldexp(1.0, k) * std::exp(-std::ldexp(1.0, 2 * k - 1));
    return std::sqrt(2 / pi) * s;
}

inline RademacherPrimeBounds rademacher_prime_bounds(uint64_t n, const PrimeConvention& conv, const ArithCache& cache,
                                                     double c_eps = 0.0, double c_eps_prime = 0.0, double eps = 0.1) {
    RademacherPrimeBounds r;
    r.lower_constant = 4 / std::sqrt(2 * std::exp(1.0) * pi);
    r.upper_constant = rademacher_upper_constant();
    const double ln = std::log(static_cast<double>(n));
    const double rem = std::pow(static_cast<double>(n), -0.5 + eps);
    r.lower = r.lower_constant / ln - c_eps * rem;
    r.upper = r.upper_constant / ln + c_eps_prime * rem;
    r.even_n = n % 2 == 0;
    r.exact = prime_prob_exact(ModelSpec::rademacher(n), conv, cache);
    return r;
}

// P{R_n prime, R_m prime}, n < m, via R_m = R_n + (R_m - R_n).
inline double joint_prime_prob(uint64_t n, uint64_t m, const PrimeConvention& conv, const ArithCache& cache) {
    if (m <= n) throw domain_error("need n < m");
    const auto pn = pmf_exact(ModelSpec::rademacher(n), false);
    const auto pg = pmf_exact(ModelSpec::rademacher(m - n), false);
    kahan_sum s;
    for (std::size_t i = 0; i < pn.probs.size(); ++i) {
        const int64_t p = pn.support_min + static_cast<int64_t>(i);
        if (pn.probs[i] == 0.0 || !is_prime_value(p, conv, cache)) continue;
        kahan_sum inner;
        for (std::size_t j = 0; j < pg.probs.size(); ++j) {
            if (pg.probs[j] == 0.0) continue;
            if (is_prime_value(p + pg.support_min + static_cast<int64_t>(j), conv, cache)) inner.add(pg.probs[j]);
        }
        s.add(pn.probs[i] * inner.value());
    }
    return s.value();
}

// P{R_n prime, R_n = l mod k}; with absolute_value the class of |R_n| is used.
inline double prime_in_class_prob(uint64_t n, uint64_t l, uint64_t k, const PrimeConvention& conv,
                                  const ArithCache& cache) {
    if (k == 0 || std::gcd(l, k) != 1) throw domain_error("need gcd(l, k) = 1");
    const auto pmf = pmf_exact(ModelSpec::rademacher(n), false);
    kahan_sum s;
    for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
        const int64_t v = pmf.support_min + static_cast<int64_t>(i);
        if (pmf.probs[i] == 0.0 || !is_prime_value(v, conv, cache)) continue;
        const int64_t a = v < 0 ? -v : v;
        if (static_cast<uint64_t>(a) % k == l % k) s.add(pmf.probs[i]);
    }
    return s.value();
}

struct PrimeWindow {
    double exact = 0.0;
    double window_formula = 0.0;
    double gap = 0.0;
    double scaled_gap = 0.0;  // gap * sqrt(n) / (log n)^{3/2}
};

// (1/sqrt(2 pi B_n)) sum_{p in [m_n +- sqrt(2 b B_n log n)]} e^{-(p-m_n)^2/(2 B_n)}.
inline PrimeWindow cramer_prime_window(uint64_t n, double b, const ArithCache& cache) {
    const auto mom = cramer_moments(n);
    const double nd = static_cast<double>(n);
    const double half = std::sqrt(2 * b * mom.variance * std::log(nd));
    const double hi = mom.mean + half;
    if (hi > static_cast<double>(cache.bound()) || nd > static_cast<double>(cache.bound()))
        throw capacity_error("sieve too small for the prime window");
    PrimeWindow r;
    r.exact = prime_prob_exact(ModelSpec::cramer(n), {}, cache);
    kahan_sum s;
    for (auto p : cache.primes()) {
        const double pd = static_cast<double>(p);
        if (pd > hi) break;
        if (pd < mom.mean - half) continue;
        s.add(std::exp(-(pd - mom.mean) * (pd - mom.mean) / (2 * mom.variance)));
    }
    r.window_formula = s.value() / std::sqrt(2 * pi * mom.variance);
    r.gap = std::fabs(r.exact - r.window_formula);
    r.scaled_gap = r.gap * std::sqrt(nd) / std::pow(std::log(nd), 1.5);
    return r;
}

// P{S'_n coprime to all primes <= z}; 1 counts, 0 does not.
inline double quasiprime_prob(uint64_t n, double z, const ArithCache& cache) {
    if (!(z >= 2)) throw domain_error("quasiprime needs z >= 2");
    const auto pmf = pmf_exact(ModelSpec::cramer_primed(n));
    if (static_cast<uint64_t>(pmf.support_max()) > cache.bound()) throw capacity_error("sieve too small for support");
    kahan_sum s;
    for (std::size_t i = 1; i < pmf.probs.size(); ++i) {
        const uint64_t v = i;
        if (v == 1 || static_cast<double>(cache.spf(v)) > z) s.add(pmf.probs[i]);
    }
    return s.value();
}

// N P{N | R_{N^2}}.
inline double extremal_divisor_constant(uint64_t N) {
    if (N % 2 == 1) throw domain_error("extremal divisor constant needs even N");
    if (N < 10 || N > 100'000) throw domain_error("need 10 <= N <= 1e5");
    return static_cast<double>(N) * div_spectral_rademacher(N * N, N);
}

// integral_2^x dt / log t by adaptive Gauss-Kronrod.
inline double log_integral_from2(double x) {
    if (x <= 2) return 0.0;
    // t = e^u keeps the integrand smooth over many decades.
    auto f = [](double u) { return std::exp(u) / u; };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, std::log(2.0), std::log(x), 30, 1e-14);
}

inline double log_integral_from2_expint(double x) {
    return boost::math::expint(std::log(x)) - boost::math::expint(std::log(2.0));
}

struct PntSample {
    uint64_t seed = 0;
    uint64_t count = 0;
    double li_gap_scaled = 0.0;
};

// One streaming path per seed; (count - li-offset)/sqrt(x loglog x).
inline std::vector<PntSample> cramer_pnt_sim(uint64_t x, const std::vector<uint64_t>& seeds, unsigned threads = 0) {
    if (x < 3) throw domain_error("need x >= 3");
    const double li = log_integral_from2(static_cast<double>(x));
    const double xd = static_cast<double>(x);
    const double norm = std::sqrt(xd * std::log(std::log(xd)));
    std::vector<PntSample> out(seeds.size());
    parallel_for(
        seeds.size(),
        [&](std::size_t i) {
            out[i].seed = seeds[i];
            out[i].count = cramer_count_jumps(x, seeds[i]);
            out[i].li_gap_scaled = (static_cast<double>(out[i].count) - li) / norm;
        },
        threads);
    return out;
}

struct NkSequence {
    uint64_t seed = 0;
    std::vector<uint64_t> values;  // N_1 = 1, then even N with N | R_{N^2}
};

// One Rademacher path per seed, same step draws as sample_path; streams up to N_max^2 steps.
inline NkSequence nk_sequence(uint64_t N_max, uint64_t seed, uint32_t stream = 0) {
    if (N_max < 2) throw domain_error("need N_max >= 2");
    if (N_max > 10'000) throw capacity_error("N_k sequence limited to N_max <= 1e4");
    philox4x32 gen(seed, stream);
    NkSequence r;
    r.seed = seed;
    r.values.push_back(1);
    int64_t w = 0;
    uint64_t i = 0;
    for (uint64_t N = 2; N <= N_max; N += 2) {
        for (const uint64_t stop = N * N; i < stop; ++i) w += gen.uniform() < 0.5 ? 1 : -1;
        if (mod_floor(w, static_cast<int64_t>(N)) == 0) r.values.push_back(N);
    }
    return r;
}

}  // namespace walkarith
