#pragma once

#include "audit.hpp"
#include "common.hpp"
#include "parallel.hpp"
#include "walkdist.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace walkarith {

// exp underflows to zero below this argument.
inline constexpr double exp_underflow = -745.2;

// P{d | W + u} from a mass function; exact big-integer residue sum when counts exist.
inline double div_exact_pmf(const ExactPMF& pmf, uint64_t d, uint64_t u = 0) {
    if (d == 0) throw domain_error("d must be positive");
    if (d == 1) return 1.0;
    const auto di = static_cast<int64_t>(d);
    const int64_t first = mod_floor(-(pmf.support_min + static_cast<int64_t>(u % d)), di);
    if (pmf.exact_counts) {
        const auto& c = *pmf.exact_counts;
        bigint s = 0;
        for (std::size_t i = static_cast<std::size_t>(first); i < c.size(); i += d) s += c[i];
        return ratio_pow2(s, pmf.denom_exp);
    }
    kahan_sum s;
    for (std::size_t i = static_cast<std::size_t>(first); i < pmf.probs.size(); i += d) s.add(pmf.probs[i]);
    return s.value();
}

inline double div_exact(const ModelSpec& model, uint64_t d) { return div_exact_pmf(pmf_exact(model), d, model.u); }

// Cached cos(pi r/d) for r < 2d and log cos(pi j/d) for j < d/2; evaluates the
// spectral sum for any horizon n and shift u.
class SpectralTable {
public:
    explicit SpectralTable(uint64_t d) : d_(d) {
        if (d == 0) throw domain_error("d must be positive");
        cos_.resize(2 * d);
        for (uint64_t r = 0; r < 2 * d; ++r) cos_[r] = std::cos(pi * static_cast<double>(r) / static_cast<double>(d));
        const uint64_t jmax = (d - 1) / 2;
        logcos_.resize(jmax + 1);
        for (uint64_t j = 1; j <= jmax; ++j) logcos_[j] = std::log(cos_[j]);
    }

    uint64_t modulus() const { return d_; }

    // 1/d + (2/d) sum_{1<=j<d/2} cos(pi (2u+n) j/d) cos^n(pi j/d).
    double eval(uint64_t n, uint64_t u = 0) const {
        if (d_ == 1) return 1.0;
        const uint64_t two_d = 2 * d_;
        const uint64_t w = ((2 * (u % two_d)) % two_d + n % two_d) % two_d;
        const double nd = static_cast<double>(n);
        uint64_t r = 0;
        kahan_sum s;
        for (std::size_t j = 1; j < logcos_.size(); ++j) {
            const double lp = nd * logcos_[j];
            if (lp < exp_underflow) break;  // |cos| decreases in j, all later terms are zero too
            r += w;
            if (r >= two_d) r -= two_d;
            s.add(cos_[r] * std::exp(lp));
        }
        return (1.0 + 2.0 * s.value()) / static_cast<double>(d_);
    }

private:
    uint64_t d_;
    std::vector<double> cos_;
    std::vector<double> logcos_;
};

inline double div_spectral_bernoulli(uint64_t n, uint64_t d, uint64_t u = 0) {
    if (d == 0) throw domain_error("d must be positive");
    if (d == 1) return 1.0;
    return SpectralTable(d).eval(n, u);
}

// P{d | B_n(rho) + u} = (1/d) sum_{j<d} e^{2 pi i j u/d} (1 - rho + rho e^{2 pi i j/d})^n, log domain.
inline double div_spectral_binomial(uint64_t n, uint64_t d, double rho, uint64_t u = 0) {
    if (d == 0) throw domain_error("d must be positive");
    if (d == 1) return 1.0;
    kahan_sum s;
    const double nd = static_cast<double>(n);
    for (uint64_t j = 1; j < d; ++j) {
        const double th = 2 * pi * static_cast<double>(j) / static_cast<double>(d);
        const double sh = std::sin(th / 2);
        const double la = 0.5 * nd * std::log1p(-4 * rho * (1 - rho) * sh * sh);
        if (la < exp_underflow) continue;
        const double arg = nd * std::atan2(rho * std::sin(th), 1 - rho + rho * std::cos(th)) +
                           2 * pi * static_cast<double>((j * (u % d)) % d) / static_cast<double>(d);
        s.add(std::exp(la) * std::cos(arg));
    }
    return (1.0 + s.value()) / static_cast<double>(d);
}

struct RademacherReduction {
    bool impossible = false;
    uint64_t d = 1;
    uint64_t u = 0;
};

// delta | R_M rewritten as d' | B_M + u'.
inline RademacherReduction rademacher_reduce(uint64_t M, uint64_t delta) {
    if (delta == 0) throw domain_error("delta must be positive");
    if (delta % 2 == 1) {
        const uint64_t inv2 = (delta + 1) / 2;
        const unsigned __int128 t = static_cast<unsigned __int128>(M % delta) * inv2 % delta;
        return {false, delta, (delta - static_cast<uint64_t>(t)) % delta};
    }
    if (M % 2 == 1) return {true, 0, 0};
    const uint64_t dp = delta / 2;
    return {false, dp, (dp - (M / 2) % dp) % dp};
}

inline double div_spectral_rademacher(uint64_t M, uint64_t delta) {
    const auto r = rademacher_reduce(M, delta);
    if (r.impossible) return 0.0;
    return div_spectral_bernoulli(M, r.d, r.u);
}

// Leading terms for small delta: (2 + 4 cos^M(2pi/delta))/delta for even/even,
// (1 + 2cos^M(2pi/delta) - 2cos^M(pi/delta))/delta for odd/odd. Below delta = 4 (even)
// or 5 (odd) the two leading harmonics coincide and the form double counts.
inline double rademacher_small_delta_form(uint64_t M, uint64_t delta) {
    if (delta < 4) throw domain_error("small-delta form needs delta >= 4");
    const double dd = static_cast<double>(delta), Md = static_cast<double>(M);
    auto pw = [&](double c) { return c == 0 ? 0.0 : std::copysign(std::exp(Md * std::log(std::fabs(c))), M % 2 == 0 ? 1.0 : c); };
    if (delta % 2 == 0 && M % 2 == 0) return (2 + 4 * pw(std::cos(2 * pi / dd))) / dd;
    if (delta % 2 == 1 && M % 2 == 1) return (1 + 2 * pw(std::cos(2 * pi / dd)) - 2 * pw(std::cos(pi / dd))) / dd;
    throw domain_error("small-delta form needs delta and M of equal parity");
}

enum class ThetaKind { plain, shifted, rademacher_even, rademacher_odd, cramer };

struct ThetaParams {
    uint64_t d = 1;
    double m = 0.0;  // drift
    double B = 0.0;  // variance
    double tail_tol = 1e-15;
};

struct ThetaVariant {
    ThetaKind kind = ThetaKind::plain;
    uint64_t n = 0;  // horizon (M for the Rademacher variants)
    uint64_t u = 0;
};

inline constexpr uint64_t theta_max_terms = 1'000'000;

// Smallest L with sum_{|l|>L} e^{-a l^2} < tol, via sum_{H>=1} e^{-aH^2} <= 3e^{-a} (a>=1) or 3/sqrt(a).
inline uint64_t theta_truncation(double a, double tol) {
    if (!(a > 0)) throw truncation_error("Theta series with non-positive decay does not converge");
    const double s = a >= 1 ? 3 * std::exp(-a) : 3 / std::sqrt(a);
    const double need = std::log(2 * s / tol);
    if (need <= 0) return 0;
    const double L = std::ceil(std::sqrt(need / a));
    if (L > static_cast<double>(theta_max_terms)) throw truncation_error("Theta tail not below tolerance within 1e6 terms");
    return static_cast<uint64_t>(L);
}

// sum_{|l|<=L} e^{i phase(l) - a l^2} with phase odd in l, so the sum is real.
template <class Phase>
double theta_series(double a, double tol, Phase phase) {
    const uint64_t L = theta_truncation(a, tol);
    kahan_sum s;
    s.add(1.0);
    for (uint64_t l = 1; l <= L; ++l) {
        const double ld = static_cast<double>(l);
        const double g = -a * ld * ld;
        if (g < exp_underflow) break;
        s.add(2.0 * std::cos(phase(l)) * std::exp(g));
    }
    return s.value();
}

// Theta_u(d,n) = sum_l e^{i pi (2u+n) l/d - n pi^2 l^2/(2 d^2)}; u = 0 gives Theta(d,n).
inline double theta_shifted(uint64_t d, uint64_t n, uint64_t u, double tol = 1e-15) {
    if (d == 0) throw domain_error("d must be positive");
    const double dd = static_cast<double>(d);
    const uint64_t two_d = 2 * d;
    const uint64_t w = ((2 * (u % two_d)) % two_d + n % two_d) % two_d;
    const double a = static_cast<double>(n) * pi * pi / (2 * dd * dd);
    return theta_series(a, tol, [&](uint64_t l) {
        const auto r = static_cast<uint64_t>((static_cast<unsigned __int128>(w) * l) % two_d);
        return pi * static_cast<double>(r) / dd;
    });
}

inline double theta_plain(uint64_t d, uint64_t n, double tol = 1e-15) { return theta_shifted(d, n, 0, tol); }

// Theta_1(delta, M) = 2 sum_l e^{-2 M pi^2 l^2/delta^2}.
inline double theta_rademacher_even(uint64_t delta, uint64_t M, double tol = 1e-15) {
    const double dd = static_cast<double>(delta);
    const double a = 2 * static_cast<double>(M) * pi * pi / (dd * dd);
    return 2 * theta_series(a, tol / 2, [](uint64_t) { return 0.0; });
}

// Theta_2(delta, M) = 2 sum_{l>=0} [e^{-M pi^2 (2l)^2/(2 delta^2)} - e^{-M pi^2 (2l+1)^2/(2 delta^2)}] - 1.
inline double theta_rademacher_odd(uint64_t delta, uint64_t M, double tol = 1e-15) {
    const double dd = static_cast<double>(delta);
    const double a = static_cast<double>(M) * pi * pi / (2 * dd * dd);
    return theta_series(a, tol, [](uint64_t l) { return pi * static_cast<double>(l % 2); });
}

// sum_l e^{2 i pi m l/d - 2 pi^2 B l^2/d^2}.
inline double theta_cramer(uint64_t d, double m, double B, double tol = 1e-15) {
    const double dd = static_cast<double>(d);
    const double a = 2 * pi * pi * B / (dd * dd);
    return theta_series(a, tol, [&](uint64_t l) { return 2 * pi * std::fmod(m * static_cast<double>(l), dd) / dd; });
}

inline double theta_eval(const ThetaParams& p, const ThetaVariant& v) {
    if (!(p.tail_tol > 0)) throw domain_error("tail tolerance must be positive");
    switch (v.kind) {
        case ThetaKind::plain: return theta_plain(p.d, v.n, p.tail_tol);
        case ThetaKind::shifted: return theta_shifted(p.d, v.n, v.u, p.tail_tol);
        case ThetaKind::rademacher_even: return theta_rademacher_even(p.d, v.n, p.tail_tol);
        case ThetaKind::rademacher_odd: return theta_rademacher_odd(p.d, v.n, p.tail_tol);
        case ThetaKind::cramer: return theta_cramer(p.d, p.m, p.B, p.tail_tol);
    }
    return 0.0;
}

// |Theta(d,n)/d - sqrt(2/(pi n)) sum_{z = 0 mod d} e^{-(2z-n)^2/(2n)}|.
inline double theta_poisson_residual(uint64_t d, uint64_t n) {
    if (d < 2 || d > n || n > 10'000'000) throw domain_error("need 2 <= d <= n <= 1e7");
    const double lhs = theta_plain(d, n, 1e-17) / static_cast<double>(d);
    const double nd = static_cast<double>(n), dd = static_cast<double>(d);
    const double W = std::sqrt(2 * nd * 40.0);  // e^{-40} relative cut, tail decays geometrically beyond
    const auto kmin = static_cast<int64_t>(std::floor((nd - W) / (2 * dd)));
    const auto kmax = static_cast<int64_t>(std::ceil((nd + W) / (2 * dd)));
    kahan_sum s;
    for (int64_t k = kmin; k <= kmax; ++k) {
        const double x = 2 * dd * static_cast<double>(k) - nd;
        s.add(std::exp(-x * x / (2 * nd)));
    }
    const double rhs = std::sqrt(2 / (pi * nd)) * s.value();
    return std::fabs(lhs - rhs);
}

// Rows for every (n, d), 2 <= d <= n: exact = spectral, approx = Theta_u(d,n)/d,
// scaled by n^{3/2}/(log n)^{5/2}; argmax_flag marks the sup over d per n.
inline std::vector<AuditRow> audit_theta_uniform(const std::vector<uint64_t>& n_grid, uint64_t u = 0,
                                                 unsigned threads = 0) {
    if (n_grid.empty()) throw domain_error("empty n grid");
    std::vector<AuditRow> all;
    for (uint64_t n : n_grid) {
        if (n < 2) throw domain_error("theta-uniform audit needs n >= 2");
        std::vector<AuditRow> rows(n - 1);
        const double scale = std::pow(static_cast<double>(n), 1.5) / std::pow(std::log(static_cast<double>(n)), 2.5);
        parallel_for(
            n - 1,
            [&](std::size_t i) {
                const uint64_t d = i + 2;
                AuditRow& r = rows[i];
                r.n = static_cast<int64_t>(n);
                r.d = static_cast<int64_t>(d);
                r.u = static_cast<int64_t>(u);
                r.exact = div_spectral_bernoulli(n, d, u);
                r.approx = theta_shifted(d, n, u) / static_cast<double>(d);
                r.recompute_raw();
                r.scaled_err = r.raw_err * scale;
            },
            threads);
        rows[static_cast<std::size_t>(argmax_scaled(rows))].argmax_flag = true;
        all.insert(all.end(), rows.begin(), rows.end());
    }
    sort_audit_rows(all);
    return all;
}

enum class SmallDivisorMode { alpha, rho, binomial };

struct SmallDivisorReport {
    SmallDivisorMode mode = SmallDivisorMode::alpha;
    uint64_t n = 0;
    uint64_t d_limit = 0;    // sup taken over 2 <= d < d_limit (binomial: d <= d_limit)
    double sup_err = 0.0;
    uint64_t argmax_d = 0;
    double envelope = 0.0;   // for binomial: max ratio |P - 1/d| / e^{-8 n rho(1-rho)/d^2}
    bool within_envelope = false;
    double sum_small = 0.0;  // sum_{d < sqrt n} |P{d|B_n} - 1/d|
    double sqrt_n_sup = 0.0; // sqrt(n) sup_{d<=n} |P{d|B_n} - 1/d|
};

// param is alpha, rho-hat or the binomial rho depending on mode.
inline SmallDivisorReport audit_small_divisor(uint64_t n, SmallDivisorMode mode, double param, double eps = 0.1,
                                              unsigned threads = 0) {
    if (n < 16) throw domain_error("small-divisor audit needs n >= 16");
    SmallDivisorReport rep;
    rep.mode = mode;
    rep.n = n;
    const double nd = static_cast<double>(n);
    std::vector<double> dev(n + 1, 0.0);
    const bool binom = mode == SmallDivisorMode::binomial;
    parallel_for(
        n - 1,
        [&](std::size_t i) {
            const uint64_t d = i + 2;
            const double p = binom ? div_spectral_binomial(n, d, param) : div_spectral_bernoulli(n, d);
            dev[d] = std::fabs(p - 1.0 / static_cast<double>(d));
        },
        threads);
    double lim = 0.0;
    switch (mode) {
        case SmallDivisorMode::alpha:
            lim = pi * std::sqrt(nd / (2 * param * std::log(nd)));
            rep.envelope = std::pow(nd, -param + eps);
            break;
        case SmallDivisorMode::rho:
            lim = pi / std::sqrt(2.0) * std::pow(nd, (1 - param) / 2);
            rep.envelope = std::exp(-(1 - eps) * std::pow(nd, param));
            break;
        case SmallDivisorMode::binomial: lim = nd + 1; break;
    }
    rep.d_limit = static_cast<uint64_t>(std::ceil(lim));
    double worst_ratio = 0.0;
    for (uint64_t d = 2; d <= n && static_cast<double>(d) < lim; ++d) {
        if (dev[d] > rep.sup_err) rep.sup_err = dev[d], rep.argmax_d = d;
        if (binom) {
            const double env = std::exp(-8 * nd * param * (1 - param) / static_cast<double>(d * d));
            worst_ratio = std::max(worst_ratio, env > 0 ? dev[d] / env : (dev[d] > 0 ? INFINITY : 0.0));
        }
    }
    if (binom) {
        rep.envelope = worst_ratio;
        rep.within_envelope = worst_ratio <= 1.0;
    } else {
        rep.within_envelope = rep.sup_err <= rep.envelope;
    }
    double sup_all = 0.0;
    for (uint64_t d = 2; d <= n; ++d) {
        sup_all = std::max(sup_all, dev[d]);
        if (static_cast<double>(d) < std::sqrt(nd)) rep.sum_small += dev[d];
    }
    rep.sqrt_n_sup = std::sqrt(nd) * sup_all;
    return rep;
}

// (2/d) sum_{1<=j<d/2} e^{-2 n j^2/d^2}, the basic pointwise envelope.
inline double basic_envelope(uint64_t n, uint64_t d) {
    kahan_sum s;
    const double dd = static_cast<double>(d), nd = static_cast<double>(n);
    for (uint64_t j = 1; 2 * j < d; ++j) s.add(std::exp(-2 * nd * static_cast<double>(j * j) / (dd * dd)));
    return 2 * s.value() / dd;
}

// max over 2 <= d <= n of |Theta(d,n)/d - 1/d| divided by the two-regime shape
// e^{-n pi^2/(2d^2)}/d (d <= sqrt n) or 1/sqrt n (d > sqrt n).
inline double theta_dmu_constant(uint64_t n) {
    const double nd = static_cast<double>(n);
    double c = 0.0;
    for (uint64_t d = 2; d <= n; ++d) {
        const double dd = static_cast<double>(d);
        const double dev = std::fabs(theta_plain(d, n) - 1.0) / dd;
        const double shape = dd * dd <= nd ? std::exp(-nd * pi * pi / (2 * dd * dd)) / dd : 1.0 / std::sqrt(nd);
        if (shape > 0) c = std::max(c, dev / shape);
    }
    return c;
}

// Rademacher divisibility against Theta_1/delta (even/even) or Theta_2/delta (odd/odd)
// over delta >= 2 pi sqrt(M/(2 alpha log M)); scaled by M^{3/2}/(log M)^{5/2}.
inline std::vector<AuditRow> audit_rademacher_div(uint64_t M, double alpha = 1.0, uint64_t delta_max = 0,
                                                  unsigned threads = 0) {
    const double Md = static_cast<double>(M);
    const auto dmin = static_cast<uint64_t>(std::ceil(2 * pi * std::sqrt(Md / (2 * alpha * std::log(Md)))));
    if (delta_max == 0) delta_max = M;
    std::vector<uint64_t> deltas;
    for (uint64_t d = std::max<uint64_t>(dmin, 2); d <= delta_max; ++d)
        if (d % 2 == M % 2) deltas.push_back(d);
    std::vector<AuditRow> rows(deltas.size());
    const double scale = std::pow(Md, 1.5) / std::pow(std::log(Md), 2.5);
    parallel_for(
        deltas.size(),
        [&](std::size_t i) {
            const uint64_t d = deltas[i];
            AuditRow& r = rows[i];
            r.n = static_cast<int64_t>(M);
            r.d = static_cast<int64_t>(d);
            r.exact = div_spectral_rademacher(M, d);
            r.approx = (M % 2 == 0 ? theta_rademacher_even(d, M) : theta_rademacher_odd(d, M)) / static_cast<double>(d);
            r.recompute_raw();
            r.scaled_err = r.raw_err * scale;
        },
        threads);
    if (!rows.empty()) rows[static_cast<std::size_t>(argmax_scaled(rows))].argmax_flag = true;
    return rows;
}

struct DivisibilityReport {
    double exact = 0.0;
    double spectral = 0.0;
    double theta_over_d = 0.0;
    double abs_err_spectral() const { return std::fabs(exact - spectral); }
    double abs_err_theta() const { return std::fabs(exact - theta_over_d); }
};

struct CramerDivAudit {
    DivisibilityReport report;  // exact from DP, spectral from the character identity, theta_over_d = main term
    uint64_t main_terms = 0;    // J, number of j in the main-term sum
    double raw_err = 0.0;       // |exact - main| in floating point
    double scaled_err = 0.0;
    double log10_raw_err = 0.0;     // same difference evaluated in log domain through Phi_n
    double log10_scaled_err = 0.0;
};

// Main term 1/d + (1/d) sum_{1<=j<=J} Re e^{2 i pi m j/d - 2 pi^2 B (j/d)^2}, J = (d/pi) log n sqrt(alpha/(2n)).
inline CramerDivAudit audit_cramer_div(uint64_t n, uint64_t d, double alpha = 2.0, uint64_t start = 3) {
    if (n > cramer_capacity) throw capacity_error("Cramer audit limited to n <= 2e4");
    if (d == 0 || d > n) throw domain_error("need 1 <= d <= n");
    const ModelSpec model = start == 8 ? ModelSpec::cramer_primed(n) : ModelSpec::cramer(n);
    const auto mom = cramer_moments(n, start);
    const double nd = static_cast<double>(n), dd = static_cast<double>(d);
    CramerDivAudit a;
    a.report.exact = div_exact_pmf(pmf_exact(model), d);
    a.main_terms = static_cast<uint64_t>(std::floor(dd / pi * std::log(nd) * std::sqrt(alpha / (2 * nd))));
    std::vector<log_signed> diff;
    kahan_sum main;
    main.add(1.0);
    for (uint64_t j = 1; j <= a.main_terms; ++j) {
        const double x = static_cast<double>(j) / dd;
        const double c = std::cos(2 * pi * std::fmod(mom.mean * x, 1.0));
        const double lg = -2 * pi * pi * mom.variance * x * x;
        main.add(std::exp(lg) * c);
        if (c != 0) diff.push_back({c > 0 ? -1 : 1, lg + std::log(std::fabs(c))});
    }
    a.report.theta_over_d = main.value() / dd;
    kahan_sum spec;
    spec.add(1.0);
    for (uint64_t j = 1; j < d; ++j) {
        const auto phi = cramer_charfn(n, static_cast<double>(j) / dd, start);
        const double c = std::cos(phi.arg);
        spec.add(std::exp(phi.log_abs) * c);
        if (c != 0) diff.push_back({c > 0 ? 1 : -1, phi.log_abs + std::log(std::fabs(c))});
    }
    a.report.spectral = spec.value() / dd;
    const double scale = std::pow(nd, 1.5) / (dd * dd * dd * alpha * alpha * alpha * std::pow(std::log(nd), 4));
    a.raw_err = a.report.abs_err_theta();
    a.scaled_err = a.raw_err * scale;
    const auto ls = log_sum(diff);
    a.log10_raw_err = ls.sign == 0 ? -INFINITY : (ls.log_abs - std::log(dd)) / std::log(10.0);
    a.log10_scaled_err = a.log10_raw_err + std::log10(scale);
    return a;
}

struct ModUniformity {
    double exact_sup = 0.0;
    double llt_constant = 0.0;  // fitted C in sup_m |B P{W=m} - gauss| <= C/phi(B)
    double hn_bound = 0.0;      // H_n with the fitted C
    double saud_bound = -1.0;   // Cramer only: 2e^{-eps^2 nu/2} + ((1-eps) nu)^{-alpha'}
    double nu = 0.0;
};

// phi defaults to the identity (LLT rate 1/B).
inline ModUniformity audit_mod_uniformity(const ModelSpec& model, uint64_t h,
                                          const std::function<double(double)>& phi = nullptr, double eps = 0.5,
                                          double alpha_prime = 1.6) {
    if (h == 0) throw domain_error("h must be positive");
    const auto pmf = pmf_exact(model);
    ModUniformity r;
    if (h > 1) {
        for (uint64_t mu = 0; mu < h; ++mu) {
            double dev;
            if (pmf.exact_counts) {
                bigint s = 0;
                const int64_t first = mod_floor(static_cast<int64_t>(mu) - pmf.support_min, static_cast<int64_t>(h));
                for (std::size_t i = static_cast<std::size_t>(first); i < pmf.exact_counts->size(); i += h) s += (*pmf.exact_counts)[i];
                bigint num = s * h - (bigint(1) << pmf.denom_exp);
                if (num < 0) num = -num;
                dev = ratio_pow2(num, pmf.denom_exp) / static_cast<double>(h);
            } else {
                const int64_t first = mod_floor(static_cast<int64_t>(mu) - pmf.support_min, static_cast<int64_t>(h));
                kahan_sum s;
                for (std::size_t i = static_cast<std::size_t>(first); i < pmf.probs.size(); i += h) s.add(pmf.probs[i]);
                dev = std::fabs(s.value() - 1.0 / static_cast<double>(h));
            }
            r.exact_sup = std::max(r.exact_sup, dev);
        }
    }
    const double mean = pmf.mean();
    const double sd = std::sqrt(pmf.variance());
    const double ph = phi ? phi(sd) : sd;
    const int step = model.kind == WalkKind::rademacher ? 2 : 1;
    double sup = 0.0;
    for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
        const double x = static_cast<double>(pmf.support_min + static_cast<int64_t>(i));
        if (step == 2 && (static_cast<int64_t>(i) % 2) != 0) continue;
        const double g = std::exp(-(x - mean) * (x - mean) / (2 * sd * sd)) / std::sqrt(2 * pi);
        sup = std::max(sup, std::fabs(sd * pmf.probs[i] / step - g / 1.0));
    }
    r.llt_constant = sup * ph;
    const double p23 = std::pow(ph, 2.0 / 3.0);
    const double hd = static_cast<double>(std::max<uint64_t>(h, 2));
    r.hn_bound = 1 / (std::sqrt(2 * pi) * sd) + (1 + 2 * r.llt_constant / hd) / p23 +
                 2 * std::exp(1.0) * std::sqrt(pi) * std::exp(-p23 / 16);
    if (model.is_cramer()) {
        kahan_sum nu;
        for (uint64_t j = model.start(); j <= model.n; ++j) {
            const double q = 1.0 / std::log(static_cast<double>(j));
            nu.add(std::min(q, 1 - q));
        }
        r.nu = nu.value();
        r.saud_bound = 2 * std::exp(-eps * eps * r.nu / 2) + std::pow((1 - eps) * r.nu, -alpha_prime);
    }
    return r;
}

}  // namespace walkarith
