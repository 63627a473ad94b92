#pragma once

#include "common.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace walkarith {

// Plain-text pins: one `key = value` per line, `#` starts a comment.
class PinFile {
public:
    PinFile() = default;

    static PinFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open pin file " + path);
        PinFile p;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
                continue;
            }
            std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
            std::size_t used = 0;
            const double v = std::stod(val, &used);
            if (used != val.size()) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number " + val);
            p.values_[key] = v;
        }
        return p;
    }

    std::optional<double> get(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    double require(const std::string& key) const {
        const auto v = get(key);
        if (!v) throw std::runtime_error("pin " + key + " missing");
        return *v;
    }

    const std::map<std::string, double>& values() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    std::map<std::string, double> values_;
};

// Regression when observed exceeds the pinned constant by more than the slack.
inline constexpr double golden_slack = 0.10;

enum class GoldenVerdict { pass, regression, unpinned };

inline const char* verdict_name(GoldenVerdict v) {
    switch (v) {
        case GoldenVerdict::pass: return "pass";
        case GoldenVerdict::regression: return "regression";
        default: return "unpinned";
    }
}

inline GoldenVerdict golden_verdict(double observed, std::optional<double> pinned) {
    if (!pinned) return GoldenVerdict::unpinned;
    return observed <= *pinned * (1 + golden_slack) ? GoldenVerdict::pass : GoldenVerdict::regression;
}

}  // namespace walkarith
