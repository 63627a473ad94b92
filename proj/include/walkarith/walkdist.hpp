#pragma once

#include "common.hpp"
#include "rng.hpp"

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace walkarith {

enum class WalkKind { bernoulli, rademacher, cramer, cramer_primed };

inline const char* walk_name(WalkKind k) {
    switch (k) {
        case WalkKind::bernoulli: return "bernoulli";
        case WalkKind::rademacher: return "rademacher";
        case WalkKind::cramer: return "cramer";
        case WalkKind::cramer_primed: return "cramer_primed";
    }
    return "?";
}

inline constexpr uint64_t binomial_capacity = 1'000'000;
inline constexpr uint64_t cramer_capacity = 20'000;
// Big-integer counts are materialised up to this horizon.
inline constexpr uint64_t exact_count_capacity = 8192;

struct ModelSpec {
    WalkKind kind = WalkKind::bernoulli;
    double rho = 0.5;
    uint64_t n = 1;
    uint64_t u = 0;

    static ModelSpec bernoulli(uint64_t n, double rho = 0.5, uint64_t u = 0) { return {WalkKind::bernoulli, rho, n, u}; }
    static ModelSpec rademacher(uint64_t n, uint64_t u = 0) { return {WalkKind::rademacher, 0.5, n, u}; }
    static ModelSpec cramer(uint64_t n, uint64_t u = 0) { return {WalkKind::cramer, 0.5, n, u}; }
    static ModelSpec cramer_primed(uint64_t n, uint64_t u = 0) { return {WalkKind::cramer_primed, 0.5, n, u}; }

    bool dyadic() const { return kind == WalkKind::rademacher || (kind == WalkKind::bernoulli && rho == 0.5); }
    bool is_cramer() const { return kind == WalkKind::cramer || kind == WalkKind::cramer_primed; }
    uint64_t start() const { return kind == WalkKind::cramer_primed ? 8 : 3; }

    void validate() const {
        if (kind == WalkKind::bernoulli && !(rho > 0.0 && rho < 1.0)) throw domain_error("Bernoulli rho must lie in (0,1)");
        if (is_cramer() && n < start())
            throw domain_error(std::string(walk_name(kind)) + " walk needs n >= " + std::to_string(start()));
        if (!is_cramer() && n < 1) throw domain_error("horizon must be positive");
    }
};

struct ExactPMF {
    int64_t support_min = 0;
    std::vector<double> probs;
    std::optional<std::vector<bigint>> exact_counts;
    unsigned denom_exp = 0;

    int64_t support_max() const { return support_min + static_cast<int64_t>(probs.size()) - 1; }
    double prob(int64_t v) const {
        if (v < support_min || v > support_max()) return 0.0;
        return probs[static_cast<std::size_t>(v - support_min)];
    }
    double total() const {
        kahan_sum s;
        for (double p : probs) s.add(p);
        return s.value();
    }
    double mean() const {
        kahan_sum s;
        for (std::size_t i = 0; i < probs.size(); ++i) s.add(probs[i] * static_cast<double>(support_min + static_cast<int64_t>(i)));
        return s.value();
    }
    double variance() const {
        const double m = mean();
        kahan_sum s;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const double x = static_cast<double>(support_min + static_cast<int64_t>(i)) - m;
            s.add(probs[i] * x * x);
        }
        return s.value();
    }
};

// Row n of Pascal's triangle.
inline std::vector<bigint> binomial_row(uint64_t n) {
    std::vector<bigint> row(n + 1);
    row[0] = 1;
    for (uint64_t k = 0; k < n / 2 + 1 && k < n; ++k) row[k + 1] = row[k] * (n - k) / (k + 1);
    for (uint64_t k = n / 2 + 1; k <= n; ++k) row[k] = row[n - k];
    return row;
}

// P{Bin(n, rho) = k} for k = 0..n, by ratios outward from the mode then normalised.
inline std::vector<double> binomial_probs(uint64_t n, double rho) {
    std::vector<double> p(n + 1, 0.0);
    const uint64_t mode = std::min<uint64_t>(n, static_cast<uint64_t>(std::floor((n + 1) * rho)));
    const double nd = static_cast<double>(n);
    const double lmode = std::lgamma(nd + 1) - std::lgamma(mode + 1.0) - std::lgamma(nd - mode + 1) +
                         mode * std::log(rho) + (nd - mode) * std::log1p(-rho);
    p[mode] = std::exp(lmode);
    const double odds = rho / (1.0 - rho);
    for (uint64_t k = mode; k < n; ++k) {
        p[k + 1] = p[k] * odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
        if (p[k + 1] == 0.0) break;
    }
    for (uint64_t k = mode; k > 0; --k) {
        p[k - 1] = p[k] / odds * static_cast<double>(k) / static_cast<double>(n - k + 1);
        if (p[k - 1] == 0.0) break;
    }
    kahan_sum s;
    for (double v : p) s.add(v);
    const double total = s.value();
    for (double& v : p) v /= total;
    return p;
}

struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
};

inline MomentSummary cramer_moments(uint64_t n, uint64_t start = 3) {
    if (n < start) throw domain_error("Cramer moments need n >= start");
    long double m = 0.0L, v = 0.0L;
    for (uint64_t j = start; j <= n; ++j) {
        const long double q = 1.0L / std::log(static_cast<long double>(j));
        m += q;
        v += q * (1.0L - q);
    }
    return {static_cast<double>(m), static_cast<double>(v)};
}

// Law of sum_{i=start}^n xi_i with P{xi_i = 1} = 1/log i, on 0..n-start+1.
inline std::vector<double> cramer_probs(uint64_t n, uint64_t start) {
    std::vector<double> p(n - start + 2, 0.0);
    p[0] = 1.0;
    std::size_t top = 0;
    for (uint64_t i = start; i <= n; ++i) {
        const double q = 1.0 / std::log(static_cast<double>(i));
        const double r = 1.0 - q;
        ++top;
        p[top] = p[top - 1] * q;
        for (std::size_t k = top - 1; k > 0; --k) p[k] = p[k] * r + p[k - 1] * q;
        p[0] *= r;
    }
    return p;
}

// with_counts = false skips the big-integer table when only floats are needed.
inline ExactPMF pmf_exact(const ModelSpec& model, bool with_counts = true) {
    model.validate();
    ExactPMF pmf;
    switch (model.kind) {
        case WalkKind::bernoulli:
        case WalkKind::rademacher: {
            if (model.n > binomial_capacity)
                throw capacity_error("binomial pmf limited to n <= 1e6, got " + std::to_string(model.n));
            const bool rad = model.kind == WalkKind::rademacher;
            std::vector<double> base;
            if (with_counts && model.dyadic() && model.n <= exact_count_capacity) {
                auto counts = binomial_row(model.n);
                base.resize(counts.size());
                for (std::size_t k = 0; k < counts.size(); ++k) base[k] = ratio_pow2(counts[k], static_cast<unsigned>(model.n));
                pmf.denom_exp = static_cast<unsigned>(model.n);
                if (rad) {
                    std::vector<bigint> spread(2 * model.n + 1);
                    for (std::size_t k = 0; k < counts.size(); ++k) spread[2 * k] = std::move(counts[k]);
                    pmf.exact_counts = std::move(spread);
                } else {
                    pmf.exact_counts = std::move(counts);
                }
            } else {
                base = binomial_probs(model.n, model.rho);
            }
            if (rad) {
                pmf.support_min = -static_cast<int64_t>(model.n);
                pmf.probs.assign(2 * model.n + 1, 0.0);
                for (std::size_t k = 0; k < base.size(); ++k) pmf.probs[2 * k] = base[k];
            } else {
                pmf.probs = std::move(base);
            }
            break;
        }
        case WalkKind::cramer:
        case WalkKind::cramer_primed:
            if (model.n > cramer_capacity)
                throw capacity_error("Cramer DP limited to n <= 2e4, got " + std::to_string(model.n));
            pmf.probs = cramer_probs(model.n, model.start());
            break;
    }
    return pmf;
}

struct PathSample {
    std::vector<int64_t> partial_sums;  // W_1..W_n when stored
    std::vector<uint64_t> jumps;        // Cramer jump instants in increasing order
    int64_t final_value = 0;
};

inline constexpr uint64_t stored_path_capacity = 10'000'000;

// Deterministic in (seed, stream).
inline PathSample sample_path(const ModelSpec& model, uint64_t seed, uint32_t stream = 0, bool store = true) {
    model.validate();
    if (model.n > 1'000'000'000ULL) throw capacity_error("paths limited to n <= 1e9");
    if (store && model.n > stored_path_capacity) store = false;
    philox4x32 gen(seed, stream);
    PathSample out;
    if (store) out.partial_sums.reserve(model.n);
    int64_t w = 0;
    const uint64_t first = model.is_cramer() ? model.start() : 1;
    if (store)
        for (uint64_t i = 1; i < first; ++i) out.partial_sums.push_back(0);
    for (uint64_t i = first; i <= model.n; ++i) {
        const double v = gen.uniform();
        switch (model.kind) {
            case WalkKind::bernoulli: w += v < model.rho ? 1 : 0; break;
            case WalkKind::rademacher: w += v < 0.5 ? 1 : -1; break;
            default:
                if (v * std::log(static_cast<double>(i)) < 1.0) {
                    ++w;
                    out.jumps.push_back(i);
                }
        }
        if (store) out.partial_sums.push_back(w);
    }
    out.final_value = w;
    return out;
}

// Number of Cramer jump instants in [3, x], streaming.
inline uint64_t cramer_count_jumps(uint64_t x, uint64_t seed, uint32_t stream = 0) {
    if (x > 1'000'000'000ULL) throw capacity_error("simulation limited to x <= 1e9");
    philox4x32 gen(seed, stream);
    uint64_t c = 0;
    for (uint64_t i = 3; i <= x; ++i)
        if (gen.uniform() * std::log(static_cast<double>(i)) < 1.0) ++c;
    return c;
}

struct GaussEnvelope {
    double gauss_approx = 0.0;
    double error_bound = 0.0;  // bound on |E| in P{B_n = k} = approx * exp(E)
    double x = 0.0;
};

inline GaussEnvelope dml_gauss_envelope(uint64_t n, double rho, int64_t k, double gamma = 0.5) {
    if (!(rho > 0 && rho < 1) || !(gamma > 0 && gamma < 1)) throw domain_error("need rho, gamma in (0,1)");
    const double nd = static_cast<double>(n);
    const double var = nd * rho * (1 - rho);
    if (std::fabs(k - nd * rho) > gamma * var) throw domain_error("k outside |k - n rho| <= gamma n rho (1-rho)");
    const double sd = std::sqrt(var);
    GaussEnvelope g;
    g.x = (k - nd * rho) / sd;
    g.gauss_approx = std::exp(-g.x * g.x / 2) / std::sqrt(2 * pi * var);
    const double ax = std::fabs(g.x);
    g.error_bound = (3 * ax + 2 * ax * ax * ax) / ((1 - gamma) * sd) + 1.0 / (4 * nd * std::min(rho, 1 - rho) * (1 - gamma));
    return g;
}

enum class TailSide { upper, lower };

inline double mcdiarmid_bound(double mu, double eps, TailSide side) {
    if (!(mu > 0) || !(eps > 0)) throw domain_error("mcdiarmid_bound needs mu > 0 and eps > 0");
    if (side == TailSide::upper) return std::exp(-eps * eps * mu / (2 * (1 + eps / 3)));
    return std::exp(-eps * eps * mu / 2);
}

struct CharFnValue {
    std::complex<double> value;
    double log_abs = 0.0;  // log |Phi_n(t)|, finite even when value underflows
    double arg = 0.0;
    double modulus_bound = 1.0;      // exp(-2 B_n sin^2(pi t))
    double log_modulus_bound = 0.0;
    double remainder_bound = 0.0;    // 12 m_n (pi |t|)^3
};

// Phi_n(t) = prod_{k=start}^n (1 + q_k (e^{2 pi i t} - 1)), q_k = 1/log k.
inline CharFnValue cramer_charfn(uint64_t n, double t, uint64_t start = 3) {
    if (n < start) throw domain_error("charfn needs n >= start");
    const double s = std::sin(pi * t);
    const double s2 = s * s;
    const double c2 = std::cos(2 * pi * t), sn2 = std::sin(2 * pi * t);
    kahan_sum la, ar;
    for (uint64_t k = start; k <= n; ++k) {
        const double q = 1.0 / std::log(static_cast<double>(k));
        la.add(0.5 * std::log1p(-4 * q * (1 - q) * s2));
        ar.add(std::atan2(q * sn2, 1 - q + q * c2));
    }
    const auto mom = cramer_moments(n, start);
    CharFnValue v;
    v.log_abs = la.value();
    v.arg = ar.value();
    v.value = std::polar(std::exp(v.log_abs), v.arg);
    v.log_modulus_bound = -2 * mom.variance * s2;
    v.modulus_bound = std::exp(v.log_modulus_bound);
    v.remainder_bound = 12 * mom.mean * std::pow(pi * std::fabs(t), 3);
    return v;
}

inline rational rational_from_double(double x) {
    int e = 0;
    const double m = std::frexp(x, &e);
    const auto mant = static_cast<int64_t>(std::ldexp(m, 53));
    rational r(mant);
    e -= 53;
    if (e >= 0) r *= rational(bigint(1) << e);
    else r /= rational(bigint(1) << -e);
    return r;
}

struct BernoulliPart {
    int64_t support_min = 0;
    rational theta;
    std::vector<rational> tau;       // tau[i] pairs support points i and i+1
    std::vector<rational> v_eps1;    // P{V = v_i, eps = 1}
    std::vector<rational> v_eps0;    // P{V = v_i, eps = 0}
    std::vector<rational> synthesized;  // law of V + eps L, L a fair bit
};

inline BernoulliPart bernoulli_part_decompose(const std::vector<rational>& law, int64_t support_min = 0) {
    BernoulliPart bp;
    bp.support_min = support_min;
    const std::size_t len = law.size();
    if (len < 2) throw domain_error("law has no Bernoulli part (theta = 0)");
    bp.tau.resize(len - 1);
    rational nu = 0;
    for (std::size_t i = 0; i + 1 < len; ++i) nu += std::min(law[i], law[i + 1]);
    bp.theta = nu;
    if (bp.theta == 0) throw domain_error("law has no Bernoulli part (theta = 0)");
    for (std::size_t i = 0; i + 1 < len; ++i) bp.tau[i] = bp.theta * std::min(law[i], law[i + 1]) / nu;
    bp.v_eps1.assign(len, rational(0));
    bp.v_eps0.assign(len, rational(0));
    for (std::size_t i = 0; i < len; ++i) {
        const rational left = i > 0 ? bp.tau[i - 1] : rational(0);
        const rational right = i + 1 < len ? bp.tau[i] : rational(0);
        bp.v_eps1[i] = right;
        bp.v_eps0[i] = law[i] - (left + right) / 2;
    }
    bp.synthesized.assign(len, rational(0));
    for (std::size_t i = 0; i < len; ++i) {
        bp.synthesized[i] += bp.v_eps0[i] + bp.v_eps1[i] / 2;
        if (i + 1 < len) bp.synthesized[i + 1] += bp.v_eps1[i] / 2;
    }
    return bp;
}

}  // namespace walkarith
