#pragma once

#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include "dkposc/errors.hpp"
#include "dkposc/model.hpp"

namespace dkposc {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_decimal(const std::string& value, const std::string& key, int line_no) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + value.size() || !std::isfinite(v)) {
        throw ConfigError("line " + std::to_string(line_no) + ": value for '" + key +
                          "' is not a decimal literal: '" + value + "'");
    }
    return v;
}

inline int parse_integer(const std::string& value, const std::string& key, int line_no) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || end != begin + value.size() ||
        v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError("line " + std::to_string(line_no) + ": value for '" + key +
                          "' is not a signed integer: '" + value + "'");
    }
    return static_cast<int>(v);
}

}  // namespace detail

/// Parses a line-oriented key=value configuration. Accepted keys are exactly
/// M, omega, k, m, alpha, a, delta1, delta2; unknown or duplicate keys are an
/// error. Missing keys default to 1 except m and k, which default to 0.
/// Blank lines and lines starting with '#' are ignored. The result is NOT
/// validated; call validate() before use.
inline ModelParams parse_config(std::istream& in) {
    ModelParams p;
    p.M = 1.0;
    p.omega = 1.0;
    p.k = 0.0;
    p.m = 0;
    p.alpha = 1.0;
    p.a = 1.0;
    p.delta1 = 1.0;
    p.delta2 = 1.0;

    bool seen[8] = {};
    const char* names[8] = {"M", "omega", "k", "m", "alpha", "a", "delta1", "delta2"};

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = detail::trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                              stripped + "'");
        }
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));

        int idx = -1;
        for (int i = 0; i < 8; ++i) {
            if (key == names[i]) { idx = i; break; }
        }
        if (idx < 0) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (seen[idx]) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        seen[idx] = true;

        switch (idx) {
            case 0: p.M = detail::parse_decimal(value, key, line_no); break;
            case 1: p.omega = detail::parse_decimal(value, key, line_no); break;
            case 2: p.k = detail::parse_decimal(value, key, line_no); break;
            case 3: p.m = detail::parse_integer(value, key, line_no); break;
            case 4: p.alpha = detail::parse_decimal(value, key, line_no); break;
            case 5: p.a = detail::parse_decimal(value, key, line_no); break;
            case 6: p.delta1 = detail::parse_decimal(value, key, line_no); break;
            case 7: p.delta2 = detail::parse_decimal(value, key, line_no); break;
        }
    }
    return p;
}

inline ModelParams parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline ModelParams parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

}  // namespace dkposc
