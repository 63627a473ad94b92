#include "walkarith/walkarith.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#ifndef WALKARITH_PIN_FILE
#define WALKARITH_PIN_FILE "data/goldens.txt"
#endif

using namespace walkarith;
using json = nlohmann::ordered_json;

namespace {

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string command, target;
    std::string model = "bernoulli";
    double rho = 0.5;
    std::string n, m, d, u = "0", D, k = "2", y, z, b = "1", t, eps, x, N, M, h, gaps, i;
    std::string f = "id", set = "evens", mode = "alpha", convention = "positive";
    double alpha = 0.0;
    uint64_t seeds = 1, seed = 0;
    uint32_t stream = 0;
    std::string format = "json", output, summary;
    unsigned threads = 0;
    std::string pin_file = WALKARITH_PIN_FILE;
    bool print_config = false;
};

// Grid syntax: comma list of `v`, `a:b:step` or `a:b:Nx` (geometric, factor N).
std::vector<double> parse_grid(const std::string& spec, const char* name) {
    if (spec.empty()) throw usage_error(std::string("--") + name + " is required");
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw usage_error(std::string("bad number '") + s + "' in --" + name);
        }
        if (used != s.size()) throw usage_error(std::string("bad number '") + s + "' in --" + name);
        return v;
    };
    while (std::getline(ss, tok, ',')) {
        const auto c1 = tok.find(':');
        if (c1 == std::string::npos) {
            out.push_back(num(tok));
            continue;
        }
        const auto c2 = tok.find(':', c1 + 1);
        if (c2 == std::string::npos) throw usage_error(std::string("grid '") + tok + "' needs start:stop:step");
        const double a = num(tok.substr(0, c1)), e = num(tok.substr(c1 + 1, c2 - c1 - 1));
        std::string step = tok.substr(c2 + 1);
        if (!step.empty() && step.back() == 'x') {
            const double fac = num(step.substr(0, step.size() - 1));
            if (!(fac > 1) || !(a > 0)) throw usage_error(std::string("geometric grid in --") + name + " needs start > 0, factor > 1");
            for (double v = a; v <= e * (1 + 1e-12); v *= fac) out.push_back(v);
        } else {
            const double s = num(step);
            if (!(s > 0)) throw usage_error(std::string("grid step in --") + name + " must be positive");
            for (double v = a; v <= e + s * 1e-9; v += s) out.push_back(v);
        }
    }
    if (out.empty()) throw usage_error(std::string("empty grid in --") + name);
    return out;
}

std::vector<uint64_t> parse_ugrid(const std::string& spec, const char* name) {
    std::vector<uint64_t> out;
    for (double v : parse_grid(spec, name)) {
        if (v < 0 || v > 1e18) throw usage_error(std::string("--") + name + " values must be nonnegative integers");
        const auto r = static_cast<uint64_t>(std::llround(v));
        if (out.empty() || out.back() != r) out.push_back(r);
    }
    return out;
}

uint64_t parse_one(const std::string& spec, const char* name) {
    const auto g = parse_ugrid(spec, name);
    if (g.size() != 1) throw usage_error(std::string("--") + name + " takes a single value here");
    return g.front();
}

double parse_one_double(const std::string& spec, const char* name) {
    const auto g = parse_grid(spec, name);
    if (g.size() != 1) throw usage_error(std::string("--") + name + " takes a single value here");
    return g.front();
}

ModelSpec model_of(const Options& o, uint64_t n, uint64_t u = 0) {
    if (o.model == "bernoulli") return ModelSpec::bernoulli(n, o.rho, u);
    if (o.model == "rademacher") return ModelSpec::rademacher(n, u);
    if (o.model == "cramer") return ModelSpec::cramer(n, u);
    if (o.model == "cramer-primed") return ModelSpec::cramer_primed(n, u);
    throw usage_error("unknown --model " + o.model + " (bernoulli, rademacher, cramer, cramer-primed)");
}

PrimeConvention convention_of(const Options& o) {
    if (o.convention == "positive") return {RademacherSign::positive_only};
    if (o.convention == "absolute") return {RademacherSign::absolute_value};
    throw usage_error("unknown --convention " + o.convention + " (positive, absolute)");
}

// One sieve per run, grown on demand.
const ArithCache& sieve(uint64_t need) {
    static std::unique_ptr<ArithCache> c;
    need = std::max<uint64_t>(need, 1000);
    if (!c || c->bound() < need) c = std::make_unique<ArithCache>(need);
    return *c;
}

json nullable(double v, bool ok) { return ok ? json(v) : json(nullptr); }

void emit_rows(std::ostream& os, const std::vector<json>& rows, const std::string& format) {
    if (format == "json") {
        if (rows.size() == 1) os << rows.front().dump() << '\n';
        else
            for (const auto& r : rows) os << r.dump() << '\n';
        return;
    }
    if (rows.empty()) return;
    bool first = true;
    for (const auto& [key, _] : rows.front().items()) os << (first ? "" : ",") << key, first = false;
    os << '\n';
    for (const auto& r : rows) {
        first = true;
        for (const auto& [key, v] : r.items()) {
            os << (first ? "" : ",");
            first = false;
            if (v.is_number_float()) os << format_double(v.get<double>());
            else if (v.is_string()) os << v.get<std::string>();
            else if (v.is_boolean()) os << (v.get<bool>() ? 1 : 0);
            else if (!v.is_null()) os << v.dump();
        }
        os << '\n';
    }
}

std::vector<json> compute(const Options& o) {
    std::vector<json> rows;
    const std::string& tg = o.target;
    if (tg == "div") {
        for (uint64_t n : parse_ugrid(o.n, "n"))
            for (uint64_t d : parse_ugrid(o.d, "d")) {
                const uint64_t u = parse_one(o.u, "u");
                const auto model = model_of(o, n, u);
                model.validate();
                if (d == 0) throw domain_error("d must be positive");
                json r{{"model", o.model}, {"n", n}, {"d", d}, {"u", u}};
                double exact, spectral = 0, theta = 0;
                bool has_spec = true, has_theta = true;
                if (model.kind == WalkKind::bernoulli) {
                    exact = div_exact(model, d);
                    spectral = o.rho == 0.5 ? div_spectral_bernoulli(n, d, u) : div_spectral_binomial(n, d, o.rho, u);
                    has_theta = o.rho == 0.5;
                    if (has_theta) theta = theta_shifted(d, n, u) / static_cast<double>(d);
                } else if (model.kind == WalkKind::rademacher) {
                    exact = div_exact(model, d);
                    has_spec = u == 0;
                    if (has_spec) spectral = div_spectral_rademacher(n, d);
                    has_theta = u == 0 && d >= 2 && d % 2 == n % 2;
                    if (has_theta)
                        theta = (n % 2 == 0 ? theta_rademacher_even(d, n) : theta_rademacher_odd(d, n)) / static_cast<double>(d);
                } else {
                    if (u != 0) throw usage_error("--u is not supported for Cramer models");
                    const auto a = audit_cramer_div(n, d, o.alpha > 0 ? o.alpha : 2.0, model.start());
                    exact = a.report.exact;
                    spectral = a.report.spectral;
                    theta = a.report.theta_over_d;
                }
                r["exact"] = exact;
                r["spectral"] = nullable(spectral, has_spec);
                r["theta_over_d"] = nullable(theta, has_theta);
                r["abs_err_spectral"] = nullable(std::fabs(exact - spectral), has_spec);
                r["abs_err_theta"] = nullable(std::fabs(exact - theta), has_theta);
                rows.push_back(r);
            }
    } else if (tg == "theta") {
        for (uint64_t n : parse_ugrid(o.n, "n"))
            for (uint64_t d : parse_ugrid(o.d, "d")) {
                const uint64_t u = parse_one(o.u, "u");
                json r{{"model", o.model}, {"n", n}, {"d", d}, {"u", u}};
                double th;
                if (o.model == "rademacher") {
                    if (d % 2 != n % 2) throw domain_error("Rademacher Theta variants need d and M of equal parity");
                    th = n % 2 == 0 ? theta_rademacher_even(d, n) : theta_rademacher_odd(d, n);
                } else if (o.model == "bernoulli") {
                    th = theta_shifted(d, n, u);
                } else {
                    throw usage_error("compute theta supports --model bernoulli or rademacher");
                }
                r["theta"] = th;
                r["theta_over_d"] = th / static_cast<double>(d);
                rows.push_back(r);
            }
    } else if (tg == "prime") {
        const auto conv = convention_of(o);
        for (uint64_t n : parse_ugrid(o.n, "n")) {
            const auto model = model_of(o, n);
            const auto& c = sieve(n + 1);
            json r{{"model", o.model}, {"n", n}, {"convention", o.convention}};
            r["exact"] = prime_prob_exact(model, conv, c);
            r["scaled_by_log_n"] = r["exact"].get<double>() * std::log(static_cast<double>(n));
            rows.push_back(r);
        }
    } else if (tg == "pminus") {
        for (uint64_t n : parse_ugrid(o.n, "n")) {
            const PminusEngine eng(n, sieve(n + 1), o.threads);
            for (double y : parse_grid(o.y, "y")) {
                const auto t = eng.eval(y);
                rows.push_back(json{{"n", n},
                                    {"y", y},
                                    {"exact", t.exact},
                                    {"mobius_identity", t.mobius_identity},
                                    {"zero_atom_term", eng.zero_atom_term(y)},
                                    {"mertens_gap", t.mertens_gap}});
            }
        }
    } else if (tg == "kfree") {
        const auto k = static_cast<unsigned>(parse_one(o.k, "k"));
        for (uint64_t n : parse_ugrid(o.n, "n")) {
            const auto r = kfree_prob(n, o.rho, k, sieve(n + 1));
            rows.push_back(json{{"n", n}, {"rho", o.rho}, {"k", k}, {"exact", r.exact}, {"zeta_gap", r.zeta_gap}});
        }
    } else if (tg == "coprime") {
        for (uint64_t n : parse_ugrid(o.n, "n"))
            for (uint64_t m : parse_ugrid(o.m, "m")) {
                const auto r = coprime_prob(n, m, sieve(n + 1));
                rows.push_back(json{{"n", n}, {"m", m}, {"exact", r.exact}, {"mobius_approx", r.mobius_approx},
                                    {"zeta_gap", std::fabs(r.exact - 1 / constants().zeta(2))}});
            }
    } else if (tg == "product-div") {
        for (uint64_t n : parse_ugrid(o.n, "n"))
            for (uint64_t m : parse_ugrid(o.m, "m"))
                for (uint64_t D : parse_ugrid(o.D, "D")) {
                    if (D == 0) throw domain_error("D must be positive");
                    const auto mt = product_div_mainterm(n, m, D, sieve(D + 1));
                    const double ex = product_div_exact(n, m, D);
                    rows.push_back(json{{"n", n}, {"m", m}, {"D", D}, {"exact", ex}, {"main", mt.main},
                                        {"raw_err", std::fabs(ex - mt.main)}, {"eps_bound", mt.eps_bound}});
                }
    } else if (tg == "expectations") {
        for (uint64_t n : parse_ugrid(o.n, "n")) {
            const auto e = divisor_expectations(n, o.threads);
            rows.push_back(json{{"n", n}, {"E_d", e.E_d}, {"E_sigma_minus1", e.E_sigma_minus1}, {"E_psi", e.E_psi},
                                {"E_psi_theta", e.E_psi_theta}, {"log_n", std::log(static_cast<double>(n))}});
        }
    } else if (tg == "quasiprime") {
        for (uint64_t n : parse_ugrid(o.n, "n"))
            for (double z : parse_grid(o.z, "z"))
                rows.push_back(json{{"n", n}, {"z", z}, {"exact", quasiprime_prob(n, z, sieve(n + 1))}});
    } else if (tg == "charfn") {
        const uint64_t start = o.model == "cramer-primed" ? 8 : 3;
        for (uint64_t n : parse_ugrid(o.n, "n"))
            for (double t : parse_grid(o.t, "t")) {
                const auto v = cramer_charfn(n, t, start);
                rows.push_back(json{{"n", n}, {"t", t}, {"re", v.value.real()}, {"im", v.value.imag()},
                                    {"log_abs", v.log_abs}, {"arg", v.arg}, {"modulus_bound", v.modulus_bound},
                                    {"remainder_bound", v.remainder_bound}});
            }
    } else if (tg == "density") {
        for (uint64_t n : parse_ugrid(o.n, "n")) {
            const double t = o.t.empty() ? static_cast<double>(n) : parse_one_double(o.t, "t");
            const double eps = o.eps.empty() ? 1.0 : parse_one_double(o.eps, "eps");
            const double nd = static_cast<double>(n);
            const auto top = static_cast<uint64_t>(std::max(nd + eps * std::sqrt(nd), t + 12 * std::sqrt(t)) + 2);
            const auto& c = sieve(top);
            IntegerSet A;
            if (o.set == "evens") A = IntegerSet::evens(c.bound());
            else if (o.set == "all") A = IntegerSet::all(c.bound());
            else if (o.set == "primes") A = IntegerSet::primes(c);
            else if (o.set.rfind("kfree", 0) == 0) A = IntegerSet::kfree(static_cast<unsigned>(std::stoul(o.set.substr(5))), c);
            else if (o.set.rfind("smooth", 0) == 0) A = IntegerSet::smooth(std::stoull(o.set.substr(6)), c);
            else throw usage_error("unknown --set " + o.set + " (evens, all, primes, kfreeK, smoothY)");
            const auto s = density_suite(A, n, o.rho, t, eps);
            rows.push_back(json{{"set", A.name}, {"n", n}, {"rho", o.rho}, {"t", t}, {"eps", eps}, {"cesaro", s.cesaro},
                                {"euler", s.euler}, {"borel", s.borel}, {"window", s.window}});
        }
    } else if (tg == "pascal") {
        const auto is = parse_ugrid(o.i.empty() ? "0:8:1" : o.i, "i");
        const uint64_t top = *std::max_element(is.begin(), is.end());
        if (top > pascal_capacity) throw capacity_error("Pascal inversion limited to i <= 64");
        const auto& c = sieve(top + 1);
        std::function<rational(uint64_t)> f;
        if (o.f == "id") f = [](uint64_t v) { return rational(v); };
        else if (o.f == "square") f = [](uint64_t v) { return rational(v * v); };
        else if (o.f == "cube") f = [](uint64_t v) { return rational(v * v * v); };
        else if (o.f == "mu") f = [&](uint64_t v) { return rational(v == 0 ? 0 : c.mu(v)); };
        else if (o.f == "divisors") f = [&](uint64_t v) { return rational(v == 0 ? top : c.divisor_count(v)); };
        else throw usage_error("unknown --f " + o.f + " (id, square, cube, mu, divisors)");
        std::vector<rational> vals(top + 1);
        for (uint64_t v = 0; v <= top; ++v) vals[v] = f(v);
        const auto Ef = binomial_expectations(vals, top);
        for (uint64_t i : is) {
            const rational inv = pascal_invert(Ef, i);
            json r{{"f", o.f}, {"i", i}, {"E_f", to_double(Ef[i])}, {"inverted", inv.str()}, {"expected", vals[i].str()},
                   {"round_trip", inv == vals[i]}};
            r["literal"] = i >= 1 ? json(pascal_invert_literal(Ef, i).str()) : json(nullptr);
            rows.push_back(r);
        }
    } else {
        throw usage_error("unknown compute target '" + tg +
                          "' (div, theta, prime, pminus, kfree, coprime, product-div, expectations, quasiprime, charfn, "
                          "density, pascal)");
    }
    return rows;
}

AuditRow row_of(int64_t n, int64_t d, double exact, double approx, double scale) {
    AuditRow r;
    r.n = n;
    r.d = d;
    r.exact = exact;
    r.approx = approx;
    r.recompute_raw();
    r.scaled_err = r.raw_err * scale;
    return r;
}

void flag_argmax_per_n(std::vector<AuditRow>& rows) {
    std::size_t a = 0;
    while (a < rows.size()) {
        std::size_t b = a;
        std::size_t best = a;
        while (b < rows.size() && rows[b].n == rows[a].n) {
            if (rows[b].scaled_err > rows[best].scaled_err) best = b;
            ++b;
        }
        rows[best].argmax_flag = true;
        a = b;
    }
}

std::vector<AuditRow> audit(const Options& o) {
    std::vector<AuditRow> rows;
    const std::string& a = o.target;
    if (a == "theta-uniform") {
        return audit_theta_uniform(parse_ugrid(o.n, "n"), parse_one(o.u, "u"), o.threads);
    } else if (a == "small-divisor") {
        SmallDivisorMode mode;
        if (o.mode == "alpha") mode = SmallDivisorMode::alpha;
        else if (o.mode == "rho") mode = SmallDivisorMode::rho;
        else if (o.mode == "binomial") mode = SmallDivisorMode::binomial;
        else throw usage_error("unknown --mode " + o.mode + " (alpha, rho, binomial)");
        const double param = mode == SmallDivisorMode::binomial ? o.rho : (o.alpha > 0 ? o.alpha : 1.0);
        const double eps = o.eps.empty() ? 0.1 : parse_one_double(o.eps, "eps");
        for (uint64_t n : parse_ugrid(o.n, "n")) {
            const auto s = audit_small_divisor(n, mode, param, eps, o.threads);
            AuditRow r;
            r.n = static_cast<int64_t>(n);
            r.d = static_cast<int64_t>(s.argmax_d);
            r.exact = s.sup_err;
            r.approx = s.envelope;
            r.raw_err = s.sup_err;
            r.scaled_err = mode == SmallDivisorMode::binomial ? s.envelope : (s.envelope > 0 ? s.sup_err / s.envelope : INFINITY);
            r.argmax_flag = true;
            r.extra = {{"mode", o.mode}, {"d_limit", std::to_string(s.d_limit)}, {"within_envelope", s.within_envelope ? "1" : "0"},
                       {"sum_small", format_double(s.sum_small)}, {"sqrt_n_sup", format_double(s.sqrt_n_sup)}};
            rows.push_back(r);
        }
    } else if (a == "rademacher-div") {
        const std::string& grid = o.M.empty() ? o.n : o.M;
        for (uint64_t M : parse_ugrid(grid, "M")) {
            auto part = audit_rademacher_div(M, o.alpha > 0 ? o.alpha : 1.0, 0, o.threads);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        sort_audit_rows(rows);
    } else if (a == "cramer-div") {
        const double alpha = o.alpha > 0 ? o.alpha : 2.0;
        const uint64_t start = o.model == "cramer-primed" ? 8 : 3;
        const auto ns = parse_ugrid(o.n, "n");
        const auto ds = parse_ugrid(o.d.empty() ? "2,3,5,7" : o.d, "d");
        std::vector<std::pair<uint64_t, uint64_t>> pts;
        for (uint64_t n : ns)
            for (uint64_t d : ds) pts.emplace_back(n, d);
        rows.resize(pts.size());
        parallel_for(
            pts.size(),
            [&](std::size_t i) {
                const auto [n, d] = pts[i];
                const auto c = audit_cramer_div(n, d, alpha, start);
                AuditRow& r = rows[i];
                r.n = static_cast<int64_t>(n);
                r.d = static_cast<int64_t>(d);
                r.exact = c.report.exact;
                r.approx = c.report.theta_over_d;
                // The log-domain difference survives cancellation below double resolution.
                r.raw_err = std::pow(10.0, c.log10_raw_err);
                r.scaled_err = std::pow(10.0, c.log10_scaled_err);
                r.extra = {{"main_terms", std::to_string(c.main_terms)}, {"float_raw_err", format_double(c.raw_err)},
                           {"log10_scaled_err", format_double(c.log10_scaled_err)}};
            },
            o.threads);
        sort_audit_rows(rows);
        flag_argmax_per_n(rows);
    } else if (a == "mod-uniformity") {
        for (uint64_t n : parse_ugrid(o.n, "n"))
            for (uint64_t h : parse_ugrid(o.h.empty() ? "2:10:1" : o.h, "h")) {
                const auto m = model_of(o, n);
                const auto r0 = audit_mod_uniformity(m, h);
                AuditRow r;
                r.n = static_cast<int64_t>(n);
                r.d = static_cast<int64_t>(h);
                r.exact = r0.exact_sup;
                r.approx = r0.hn_bound;
                r.raw_err = r0.exact_sup;
                r.scaled_err = r0.exact_sup / r0.hn_bound;
                r.extra = {{"model", o.model}, {"llt_constant", format_double(r0.llt_constant)},
                           {"saud_bound", format_double(r0.saud_bound)}, {"nu", format_double(r0.nu)}};
                rows.push_back(r);
            }
        flag_argmax_per_n(rows);
    } else if (a == "product-div") {
        const auto gaps = parse_ugrid(o.gaps.empty() ? "4,8,16" : o.gaps, "gaps");
        const auto Ds = parse_ugrid(o.D.empty() ? "2:36:1" : o.D, "D");
        const auto& c = sieve(*std::max_element(Ds.begin(), Ds.end()) + 1);
        std::vector<std::tuple<uint64_t, uint64_t, uint64_t>> pts;
        for (uint64_t n : parse_ugrid(o.n, "n"))
            for (uint64_t g : gaps)
                for (uint64_t D : Ds) pts.emplace_back(n, g, D);
        rows.resize(pts.size());
        parallel_for(
            pts.size(),
            [&](std::size_t i) {
                const auto [n, g, D] = pts[i];
                const double scale = 1 / std::sqrt(std::pow(static_cast<double>(D), 1.1) / static_cast<double>(n));
                rows[i] = row_of(static_cast<int64_t>(n), static_cast<int64_t>(D), product_div_exact(n, n + g, D),
                                 product_div_mainterm(n, n + g, D, c).main, scale);
                rows[i].extra = {{"m", std::to_string(n + g)}};
            },
            o.threads);
        // Rows follow the (n, gap, D) order of pts.
        flag_argmax_per_n(rows);
    } else if (a == "mertens") {
        for (uint64_t n : parse_ugrid(o.n, "n")) {
            const PminusEngine eng(n, sieve(n + 1), o.threads);
            for (double y : parse_grid(o.y, "y")) {
                const auto t = eng.eval(y);
                const double ly = std::log(y);
                auto r = row_of(static_cast<int64_t>(n), static_cast<int64_t>(std::floor(y)), t.exact,
                                constants().mertens_factor / ly, ly * ly);
                r.extra = {{"y", format_double(y)}, {"mobius_identity", format_double(t.mobius_identity)}};
                rows.push_back(r);
            }
        }
        flag_argmax_per_n(rows);
    } else if (a == "extremal-s") {
        const std::string& grid = o.N.empty() ? o.n : o.N;
        for (uint64_t N : parse_ugrid(grid, "N")) {
            const double Nd = static_cast<double>(N);
            auto r = row_of(static_cast<int64_t>(N * N), static_cast<int64_t>(N), extremal_divisor_constant(N),
                            constants().rademacher_s, Nd * Nd / std::pow(std::log(Nd), 2.5));
            r.argmax_flag = true;
            rows.push_back(r);
        }
    } else if (a == "prime-window") {
        const double b = parse_one_double(o.b, "b");
        for (uint64_t n : parse_ugrid(o.n, "n")) {
            const auto mom = cramer_moments(n);
            const auto& c = sieve(static_cast<uint64_t>(mom.mean + std::sqrt(2 * b * mom.variance * std::log(static_cast<double>(n)))) + n + 2);
            const auto w = cramer_prime_window(n, b, c);
            AuditRow r;
            r.n = static_cast<int64_t>(n);
            r.exact = w.exact;
            r.approx = w.window_formula;
            r.raw_err = w.gap;
            r.scaled_err = w.scaled_gap;
            r.argmax_flag = true;
            r.extra = {{"b", format_double(b)}};
            rows.push_back(r);
        }
    } else {
        throw usage_error("unknown audit '" + a +
                          "' (theta-uniform, small-divisor, cramer-div, mod-uniformity, product-div, mertens, "
                          "rademacher-div, extremal-s, prime-window)");
    }
    return rows;
}

// Audits whose scaling depends on the model or regime get one pin per variant.
std::string pin_key(const Options& o) {
    std::string k = o.target;
    if (k == "mod-uniformity") k += "." + o.model;
    if (k == "small-divisor") k += "." + o.mode;
    std::replace(k.begin(), k.end(), '-', '_');
    return k + ".max_scaled_err";
}

json config_json(const CLI::App& app) {
    json c = json::object();
    std::stringstream ss(app.config_to_str(false, false));
    std::string line;
    while (std::getline(ss, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string v = line.substr(eq + 1);
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
        c[line.substr(0, eq)] = v;
    }
    return c;
}

int run_audit(const Options& o, const CLI::App& app, std::ostream& out) {
    auto rows = audit(o);
    write_audit_csv(out, rows);
    json s{{"audit", o.target}, {"rows", rows.size()}};
    const long am = argmax_scaled(rows);
    double max_raw = 0.0;
    std::map<int64_t, double> per_n;
    for (const auto& r : rows) {
        max_raw = std::max(max_raw, r.raw_err);
        per_n[r.n] = std::max(per_n[r.n], r.scaled_err);
    }
    if (am >= 0) {
        const auto& r = rows[static_cast<std::size_t>(am)];
        s["max_scaled_err"] = r.scaled_err;
        s["argmax"] = json{{"n", r.n}, {"d", r.d}};
    } else {
        s["max_scaled_err"] = nullptr;
        s["argmax"] = nullptr;
    }
    s["max_abs_gap"] = max_raw;
    double lo = INFINITY, hi = 0.0;
    for (const auto& [n, v] : per_n) lo = std::min(lo, v), hi = std::max(hi, v);
    s["band_ratio"] = per_n.size() >= 2 && lo > 0 ? json(hi / lo) : json(nullptr);
    const std::string key = pin_key(o);
    std::optional<double> pinned;
    if (!o.pin_file.empty()) pinned = PinFile::load(o.pin_file).get(key);
    const auto v = golden_verdict(am >= 0 ? rows[static_cast<std::size_t>(am)].scaled_err : 0.0, pinned);
    s["golden"] = json{{"key", key}, {"pinned", pinned ? json(*pinned) : json(nullptr)}, {"slack", golden_slack},
                       {"verdict", verdict_name(v)}};
    s["config"] = config_json(app);
    if (o.summary.empty() || o.summary == "-") {
        std::cerr << s.dump() << '\n';
    } else {
        std::ofstream f(o.summary);
        if (!f) throw usage_error("cannot write --summary " + o.summary);
        f << s.dump() << '\n';
    }
    return v == GoldenVerdict::regression ? 4 : 0;
}

void simulate(const Options& o, std::ostream& out) {
    std::vector<uint64_t> seeds(o.seeds);
    for (uint64_t s = 0; s < o.seeds; ++s) seeds[s] = o.seed + s;
    if (o.target == "cramer-pnt") {
        const uint64_t x = parse_one(o.x, "x");
        for (const auto& p : cramer_pnt_sim(x, seeds, o.threads))
            out << json{{"seed", p.seed}, {"x", x}, {"count", p.count}, {"li_gap_scaled", p.li_gap_scaled}}.dump() << '\n';
    } else if (o.target == "path") {
        const uint64_t n = parse_one(o.n, "n");
        const auto model = model_of(o, n);
        for (uint64_t s : seeds) {
            const auto p = sample_path(model, s, o.stream, n <= 10'000);
            json r{{"seed", s}, {"stream", o.stream}, {"model", o.model}, {"n", n}, {"final_value", p.final_value}};
            if (!p.partial_sums.empty()) {
                std::vector<int64_t> inc(p.partial_sums.size());
                for (std::size_t i = 0; i < inc.size(); ++i) inc[i] = p.partial_sums[i] - (i ? p.partial_sums[i - 1] : 0);
                r["increments"] = inc;
            }
            if (model.is_cramer()) r["jumps"] = p.jumps;
            out << r.dump() << '\n';
        }
    } else if (o.target == "nk-sequence") {
        const uint64_t N = parse_one(o.N.empty() ? o.n : o.N, "N");
        std::vector<NkSequence> res(seeds.size());
        parallel_for(seeds.size(), [&](std::size_t i) { res[i] = nk_sequence(N, seeds[i], o.stream); }, o.threads);
        for (const auto& q : res) {
            const auto k = q.values.size();
            out << json{{"seed", q.seed}, {"N_max", N}, {"k", k}, {"values", q.values},
                        {"log_N_k", std::log(static_cast<double>(q.values.back()))},
                        {"k_over_s", static_cast<double>(k) / constants().rademacher_s}}
                       .dump()
                << '\n';
        }
    } else {
        throw usage_error("unknown simulation '" + o.target + "' (cramer-pnt, path, nk-sequence)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Divisibility and arithmetic statistics of random walks"};
    app.set_help_flag("--help", "print this help and exit");
    app.set_config("--config", "", "key=value file; command-line flags override it");
    Options o;
    app.add_option("command", o.command, "compute, audit or simulate")->required();
    app.add_option("target", o.target, "what to compute, audit or simulate")->required();
    app.add_option("--model", o.model, "bernoulli, rademacher, cramer or cramer-primed");
    app.add_option("--rho", o.rho, "Bernoulli step probability");
    app.add_option("--n", o.n, "horizon grid");
    app.add_option("--m", o.m, "second horizon grid");
    app.add_option("--d", o.d, "divisor grid");
    app.add_option("--u", o.u, "shift");
    app.add_option("--D", o.D, "product divisor grid");
    app.add_option("--k", o.k, "k-free exponent");
    app.add_option("--y", o.y, "smoothness grid");
    app.add_option("--z", o.z, "quasiprime sieve level grid");
    app.add_option("--b", o.b, "prime window width parameter");
    app.add_option("--t", o.t, "charfn frequency grid or Borel time");
    app.add_option("--eps", o.eps, "window width or envelope slack");
    app.add_option("--x", o.x, "simulation range");
    app.add_option("--N", o.N, "extremal or N_k grid");
    app.add_option("--M", o.M, "Rademacher horizon grid");
    app.add_option("--h", o.h, "modulus grid");
    app.add_option("--gaps", o.gaps, "gap grid m - n");
    app.add_option("--i", o.i, "Pascal index grid");
    app.add_option("--f", o.f, "Pascal test function: id, square, cube, mu, divisors");
    app.add_option("--set", o.set, "density set: evens, all, primes, kfreeK, smoothY");
    app.add_option("--mode", o.mode, "small-divisor regime: alpha, rho, binomial");
    app.add_option("--convention", o.convention, "sign convention for R_n prime: positive, absolute");
    app.add_option("--alpha", o.alpha, "regime parameter");
    app.add_option("--seeds", o.seeds, "number of seeds");
    app.add_option("--seed", o.seed, "first seed");
    app.add_option("--stream", o.stream, "RNG stream id");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", o.output, "write rows here instead of stdout");
    app.add_option("--summary", o.summary, "audit summary JSON path (default stderr)");
    app.add_option("--threads", o.threads, "worker threads (default WALKARITH_THREADS or hardware)");
    app.add_option("--pin-file", o.pin_file, "golden constants file");
    app.add_flag("--print-config", o.print_config, "print the effective configuration and exit")->configurable(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }
    if (o.print_config) {
        std::cout << app.config_to_str(false, false);
        return 0;
    }
    try {
        std::ofstream file;
        if (!o.output.empty()) {
            file.open(o.output);
            if (!file) throw usage_error("cannot write --output " + o.output);
        }
        std::ostream& out = o.output.empty() ? std::cout : file;
        if (o.command == "compute") {
            emit_rows(out, compute(o), o.format);
            return 0;
        }
        if (o.command == "audit") return run_audit(o, app, out);
        if (o.command == "simulate") {
            simulate(o, out);
            return 0;
        }
        throw usage_error("unknown command '" + o.command + "' (compute, audit, simulate)");
    } catch (const capacity_error& e) {
        std::cerr << json{{"error", "capacity"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    } catch (const truncation_error& e) {
        std::cerr << json{{"error", "truncation"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
}
