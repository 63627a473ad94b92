#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace walkarith {

// One grid point of an error-bound audit. Module-specific columns (m, delta,
// D, y, z, b, convention, method, rho, t, eps) go to `extra` in a fixed order.
struct AuditRow {
    int64_t n = 0;
    int64_t d = 0;
    int64_t u = 0;
    double exact = 0.0;
    double approx = 0.0;
    double raw_err = 0.0;
    double scaled_err = 0.0;
    bool argmax_flag = false;
    std::vector<std::pair<std::string, std::string>> extra;

    void recompute_raw() { raw_err = std::fabs(exact - approx); }
};

inline const char* audit_csv_header() { return "n,d,u,exact,approx,raw_err,scaled_err,argmax_flag"; }

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_audit_csv(std::ostream& os, const std::vector<AuditRow>& rows) {
    os << audit_csv_header();
    if (!rows.empty())
        for (const auto& [k, v] : rows.front().extra) os << ',' << k;
    os << '\n';
    for (const auto& r : rows) {
        os << r.n << ',' << r.d << ',' << r.u << ',' << format_double(r.exact) << ',' << format_double(r.approx) << ','
           << format_double(r.raw_err) << ',' << format_double(r.scaled_err) << ',' << (r.argmax_flag ? 1 : 0);
        for (const auto& [k, v] : r.extra) os << ',' << v;
        os << '\n';
    }
}

inline void sort_audit_rows(std::vector<AuditRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const AuditRow& a, const AuditRow& b) {
        return a.n != b.n ? a.n < b.n : a.d < b.d;
    });
}

// Index of the row with the largest scaled error (first on ties), or -1.
inline long argmax_scaled(const std::vector<AuditRow>& rows) {
    long best = -1;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (best < 0 || rows[i].scaled_err > rows[static_cast<std::size_t>(best)].scaled_err) best = static_cast<long>(i);
    return best;
}

}  // namespace walkarith
