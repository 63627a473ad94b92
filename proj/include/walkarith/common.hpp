#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace walkarith {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

// Raised when a request exceeds a documented table or DP bound.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an argument is outside the mathematical domain of an operation.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a series does not reach its tail tolerance within the term budget.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double pi = std::numbers::pi;

// count / 2^e as a double without overflowing for counts above 2^1024.
inline double ratio_pow2(const bigint& count, unsigned e) {
    if (count == 0) return 0.0;
    const unsigned bits = boost::multiprecision::msb(count) + 1;
    if (bits <= 64) return std::ldexp(count.convert_to<double>(), -static_cast<int>(e));
    const unsigned shift = bits - 64;
    const bigint top = count >> shift;
    return std::ldexp(top.convert_to<double>(), static_cast<int>(shift) - static_cast<int>(e));
}

inline double to_double(const rational& q) {
    const bigint& num = boost::multiprecision::numerator(q);
    const bigint& den = boost::multiprecision::denominator(q);
    if (num == 0) return 0.0;
    const int nb = static_cast<int>(boost::multiprecision::msb(num < 0 ? bigint(-num) : num));
    const int db = static_cast<int>(boost::multiprecision::msb(den));
    if (nb < 1000 && db < 1000) return q.convert_to<double>();
    // Scale both to ~64 significant bits before dividing.
    const int ns = std::max(0, nb - 63), ds = std::max(0, db - 63);
    const double a = bigint(num >> ns).convert_to<double>();
    const double b = bigint(den >> ds).convert_to<double>();
    return std::ldexp(a / b, ns - ds);
}

inline int64_t mod_floor(int64_t a, int64_t m) {
    const int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// Neumaier compensated accumulator.
struct kahan_sum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Sum of signed terms given as (sign, log|term|); result as (sign, log|sum|).
struct log_signed {
    int sign = 0;
    double log_abs = -INFINITY;
};

inline log_signed log_sum(const std::vector<log_signed>& terms) {
    double top = -INFINITY;
    for (const auto& t : terms)
        if (t.sign != 0) top = std::max(top, t.log_abs);
    if (!std::isfinite(top)) return {};
    double acc = 0.0;
    for (const auto& t : terms)
        if (t.sign != 0) acc += t.sign * std::exp(t.log_abs - top);
    if (acc == 0.0) return {};
    return {acc > 0 ? 1 : -1, top + std::log(std::fabs(acc))};
}

}  // namespace walkarith
