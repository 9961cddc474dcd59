#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dkposc/errors.hpp"
#include "dkposc/model.hpp"
#include "dkposc/nu.hpp"
#include "dkposc/version.hpp"

namespace dkposc {

enum class SweptParam { alpha, omega, a, delta1, delta2 };

inline const char* to_string(SweptParam s) {
    switch (s) {
        case SweptParam::alpha: return "alpha";
        case SweptParam::omega: return "omega";
        case SweptParam::a: return "a";
        case SweptParam::delta1: return "delta1";
        case SweptParam::delta2: return "delta2";
    }
    return "?";
}

inline SweptParam parse_swept_param(const std::string& s) {
    if (s == "alpha") return SweptParam::alpha;
    if (s == "omega") return SweptParam::omega;
    if (s == "a") return SweptParam::a;
    if (s == "delta1") return SweptParam::delta1;
    if (s == "delta2") return SweptParam::delta2;
    throw SpecError("unknown sweep parameter '" + s +
                    "' (expected alpha, omega, a, delta1 or delta2)");
}

inline ModelParams with_swept(ModelParams base, SweptParam swept, double value) {
    switch (swept) {
        case SweptParam::alpha: base.alpha = value; break;
        case SweptParam::omega: base.omega = value; break;
        case SweptParam::a: base.a = value; break;
        case SweptParam::delta1: base.delta1 = value; break;
        case SweptParam::delta2: base.delta2 = value; break;
    }
    return base;
}

struct SweepSpec {
    ModelParams base;
    SweptParam swept = SweptParam::alpha;
    double lo = 0.0;
    double hi = 0.0;
    int steps = 25;             ///< number of grid points, >= 2
    std::vector<int> levels;    ///< radial quantum numbers
    QuantizationMode mode = QuantizationMode::nu_standard;
    Branch branch = Branch::positive;
};

/// Checks the sweep specification, normalizes the level list, and verifies
/// that both range endpoints produce a solvable parameter set.
inline SweepSpec validate_spec(SweepSpec spec) {
    validate(spec.base);
    if (!(spec.lo < spec.hi)) {
        throw SpecError("sweep range must satisfy lo < hi");
    }
    if (spec.steps < 2) {
        throw SpecError("sweep needs at least 2 steps");
    }
    if (spec.levels.empty()) {
        throw SpecError("sweep needs at least one level");
    }
    for (int n : spec.levels) {
        if (n < 0) throw SpecError("levels must be >= 0");
    }
    std::sort(spec.levels.begin(), spec.levels.end());
    spec.levels.erase(std::unique(spec.levels.begin(), spec.levels.end()), spec.levels.end());
    for (double endpoint : {spec.lo, spec.hi}) {
        try {
            const ModelParams p = validate(with_swept(spec.base, spec.swept, endpoint));
            require_confining(p);
        } catch (const Error& e) {
            throw SpecError("swept range endpoint " + std::to_string(endpoint) +
                            " violates model invariants: " + e.what());
        }
    }
    return spec;
}

/// A single sweep result. `error` is empty for solved points; gap rows carry
/// the error kind and a NaN energy, and are never silently dropped.
struct SweepRow {
    double value = 0.0;
    int n = 0;
    double energy = std::numeric_limits<double>::quiet_NaN();
    double residual = 0.0;
    std::string error;
};

struct SweepTable {
    SweepSpec spec;
    std::string version = kVersion;
    std::vector<SweepRow> rows;  ///< sorted by (value, n)
};

namespace detail {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline bool double_identical(double x, double y) {
    return x == y || (std::isnan(x) && std::isnan(y));
}

}  // namespace detail

inline bool operator==(const SweepRow& a, const SweepRow& b) {
    return detail::double_identical(a.value, b.value) && a.n == b.n &&
           detail::double_identical(a.energy, b.energy) &&
           detail::double_identical(a.residual, b.residual) && a.error == b.error;
}

inline bool operator==(const SweepSpec& a, const SweepSpec& b) {
    return a.base.M == b.base.M && a.base.omega == b.base.omega && a.base.k == b.base.k &&
           a.base.m == b.base.m && a.base.alpha == b.base.alpha && a.base.a == b.base.a &&
           a.base.delta1 == b.base.delta1 && a.base.delta2 == b.base.delta2 &&
           a.swept == b.swept && a.lo == b.lo && a.hi == b.hi && a.steps == b.steps &&
           a.levels == b.levels && a.mode == b.mode && a.branch == b.branch;
}

inline bool operator==(const SweepTable& a, const SweepTable& b) {
    return a.spec == b.spec && a.version == b.version && a.rows == b.rows;
}

/// Grid point i of the sweep; the last point is exactly `hi` so invariant
/// boundaries (e.g. alpha = 1) are hit without rounding overshoot.
inline double sweep_value(const SweepSpec& spec, int i) {
    if (i == spec.steps - 1) return spec.hi;
    return spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) /
                         static_cast<double>(spec.steps - 1);
}

/// One closed-form solve per (grid point, level). Points are solved by a
/// pool of `jobs` workers and gathered in index order, so the output is
/// deterministic regardless of scheduling.
inline SweepTable run_sweep(const SweepSpec& raw_spec, int jobs = 1,
                            const SolveOptions& opts = {}) {
    const SweepSpec spec = validate_spec(raw_spec);
    const std::size_t level_count = spec.levels.size();
    const std::size_t task_count = static_cast<std::size_t>(spec.steps) * level_count;

    SweepTable table;
    table.spec = spec;
    table.rows.resize(task_count);

    auto solve_one = [&](std::size_t task) {
        const int point = static_cast<int>(task / level_count);
        const int level = spec.levels[task % level_count];
        const double value = sweep_value(spec, point);
        SweepRow row;
        row.value = value;
        row.n = level;
        try {
            const ModelParams p = with_swept(spec.base, spec.swept, value);
            const EnergySolution sol = solve_energy(p, level, spec.mode, spec.branch, opts);
            row.energy = sol.energy;
            row.residual = sol.residual;
        } catch (const Error& e) {
            row.error = e.kind();
        }
        table.rows[task] = row;
    };

    if (jobs <= 1) {
        for (std::size_t t = 0; t < task_count; ++t) solve_one(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const int width = std::min<std::size_t>(jobs, task_count);
        workers.reserve(width);
        for (int w = 0; w < width; ++w) {
            workers.emplace_back([&]() {
                for (std::size_t t = next.fetch_add(1); t < task_count; t = next.fetch_add(1)) {
                    solve_one(t);
                }
            });
        }
        for (std::thread& t : workers) t.join();
    }
    return table;
}

/// CSV emission: '#' metadata lines (full parameter echo, mode, version),
/// then the header row `param,value,n,E,residual`. '.' decimal separator,
/// 17 significant digits, '\n' line endings; byte-identical across reruns.
inline void write_csv(const SweepTable& table, std::ostream& out) {
    const SweepSpec& s = table.spec;
    const ModelParams& b = s.base;
    using detail::format_g17;
    out << "# " << kToolName << " " << table.version << " sweep\n";
    out << "# base M=" << format_g17(b.M) << " omega=" << format_g17(b.omega)
        << " k=" << format_g17(b.k) << " m=" << b.m << " alpha=" << format_g17(b.alpha)
        << " a=" << format_g17(b.a) << " delta1=" << format_g17(b.delta1)
        << " delta2=" << format_g17(b.delta2) << "\n";
    out << "# sweep param=" << to_string(s.swept) << " from=" << format_g17(s.lo)
        << " to=" << format_g17(s.hi) << " steps=" << s.steps << " levels=";
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
        if (i) out << ",";
        out << s.levels[i];
    }
    out << "\n";
    out << "# mode=" << to_string(s.mode) << " branch=" << to_string(s.branch) << "\n";
    out << "param,value,n,E,residual\n";
    for (const SweepRow& row : table.rows) {
        out << to_string(s.swept) << "," << format_g17(row.value) << "," << row.n << ",";
        if (row.error.empty()) {
            out << format_g17(row.energy) << "," << format_g17(row.residual) << "\n";
        } else {
            out << "nan," << row.error << "\n";
        }
    }
}

inline std::string to_csv(const SweepTable& table) {
    std::ostringstream out;
    write_csv(table, out);
    return out.str();
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline double parse_csv_double(const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + s.size()) {
        throw SpecError("malformed CSV number '" + s + "'");
    }
    return v;
}

inline int parse_csv_int(const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || end != begin + s.size()) {
        throw SpecError("malformed CSV integer '" + s + "'");
    }
    return static_cast<int>(v);
}

/// key=value tokens of a metadata line after the leading marker words.
inline double meta_double(const std::string& token, const char* key) {
    const std::string prefix = std::string(key) + "=";
    if (token.rfind(prefix, 0) != 0) {
        throw SpecError("expected '" + prefix + "...' metadata token, got '" + token + "'");
    }
    return parse_csv_double(token.substr(prefix.size()));
}

inline std::string meta_string(const std::string& token, const char* key) {
    const std::string prefix = std::string(key) + "=";
    if (token.rfind(prefix, 0) != 0) {
        throw SpecError("expected '" + prefix + "...' metadata token, got '" + token + "'");
    }
    return token.substr(prefix.size());
}

}  // namespace detail

/// Parses a table emitted by write_csv; the result reproduces the in-memory
/// table exactly (bitwise doubles, metadata included).
inline SweepTable read_csv(std::istream& in) {
    SweepTable table;
    std::string line;
    std::vector<std::string> meta;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            meta.push_back(line);
            continue;
        }
        if (!header_seen) {
            if (line != "param,value,n,E,residual") {
                throw SpecError("unexpected CSV header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        const std::vector<std::string> cells = detail::split(line, ',');
        if (cells.size() != 5) {
            throw SpecError("expected 5 CSV columns, got " + std::to_string(cells.size()));
        }
        SweepRow row;
        row.value = detail::parse_csv_double(cells[1]);
        row.n = detail::parse_csv_int(cells[2]);
        char* end = nullptr;
        const double res = std::strtod(cells[4].c_str(), &end);
        if (end == cells[4].c_str() + cells[4].size() && end != cells[4].c_str()) {
            row.energy = detail::parse_csv_double(cells[3]);
            row.residual = res;
        } else {
            row.error = cells[4];  // gap row: E column is nan, residual holds the error kind
        }
        table.rows.push_back(row);
    }
    if (meta.size() != 4 || !header_seen) {
        throw SpecError("CSV is missing metadata or header lines");
    }

    {
        const std::vector<std::string> tok = detail::split(meta[0], ' ');
        if (tok.size() != 4 || tok[1] != kToolName || tok[3] != "sweep") {
            throw SpecError("unexpected CSV banner '" + meta[0] + "'");
        }
        table.version = tok[2];
    }
    {
        const std::vector<std::string> tok = detail::split(meta[1], ' ');
        if (tok.size() != 10 || tok[1] != "base") {
            throw SpecError("unexpected base metadata '" + meta[1] + "'");
        }
        ModelParams& b = table.spec.base;
        b.M = detail::meta_double(tok[2], "M");
        b.omega = detail::meta_double(tok[3], "omega");
        b.k = detail::meta_double(tok[4], "k");
        b.m = detail::parse_csv_int(detail::meta_string(tok[5], "m"));
        b.alpha = detail::meta_double(tok[6], "alpha");
        b.a = detail::meta_double(tok[7], "a");
        b.delta1 = detail::meta_double(tok[8], "delta1");
        b.delta2 = detail::meta_double(tok[9], "delta2");
    }
    {
        const std::vector<std::string> tok = detail::split(meta[2], ' ');
        if (tok.size() != 7 || tok[1] != "sweep") {
            throw SpecError("unexpected sweep metadata '" + meta[2] + "'");
        }
        table.spec.swept = parse_swept_param(detail::meta_string(tok[2], "param"));
        table.spec.lo = detail::meta_double(tok[3], "from");
        table.spec.hi = detail::meta_double(tok[4], "to");
        table.spec.steps = detail::parse_csv_int(detail::meta_string(tok[5], "steps"));
        table.spec.levels.clear();
        for (const std::string& lv : detail::split(detail::meta_string(tok[6], "levels"), ',')) {
            table.spec.levels.push_back(detail::parse_csv_int(lv));
        }
    }
    {
        const std::vector<std::string> tok = detail::split(meta[3], ' ');
        if (tok.size() != 3) {
            throw SpecError("unexpected mode metadata '" + meta[3] + "'");
        }
        table.spec.mode = parse_mode(detail::meta_string(tok[1], "mode"));
        table.spec.branch = parse_branch(detail::meta_string(tok[2], "branch"));
    }
    return table;
}

inline SweepTable read_csv_string(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

/// Preset sweeps mirroring the published parameter blocks. fig1 sweeps
/// alpha, fig2 omega, fig3 a, fig4 delta1 (single level n = 1), fig5 delta2.
/// All non-swept parameters are 1 (with m = k = 1); ranges are documented
/// choices since the plotted axis ranges are not numerically readable.
inline SweepSpec preset_spec(const std::string& name) {
    ModelParams unit;
    unit.M = 1.0;
    unit.omega = 1.0;
    unit.k = 1.0;
    unit.m = 1;
    unit.alpha = 1.0;
    unit.a = 1.0;
    unit.delta1 = 1.0;
    unit.delta2 = 1.0;

    SweepSpec spec;
    spec.base = unit;
    spec.steps = 25;
    spec.levels = {0, 1, 2, 3};
    spec.mode = QuantizationMode::nu_standard;
    spec.branch = Branch::positive;

    if (name == "fig1") {
        spec.swept = SweptParam::alpha;
        spec.lo = 0.2;  // energies diverge as alpha -> 0+, so the preset stops at 0.2
        spec.hi = 1.0;
        spec.base.alpha = spec.lo;
    } else if (name == "fig2") {
        spec.swept = SweptParam::omega;
        spec.lo = 0.2;
        spec.hi = 2.0;
        spec.base.omega = spec.lo;
    } else if (name == "fig3") {
        spec.swept = SweptParam::a;
        spec.lo = 0.0;
        spec.hi = 1.0;
        spec.base.a = spec.lo;
    } else if (name == "fig4") {
        spec.swept = SweptParam::delta1;
        spec.lo = 0.5;
        spec.hi = 2.0;
        spec.base.delta1 = spec.lo;
        spec.levels = {1};  // the source block pins n = 1
    } else if (name == "fig5") {
        spec.swept = SweptParam::delta2;
        spec.lo = 0.0;
        spec.hi = 2.0;
        spec.base.delta2 = spec.lo;
    } else {
        throw SpecError("unknown preset '" + name + "' (expected fig1..fig5)");
    }
    return spec;
}

}  // namespace dkposc
