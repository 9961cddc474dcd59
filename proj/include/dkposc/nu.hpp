#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dkposc/errors.hpp"
#include "dkposc/model.hpp"
#include "dkposc/radial.hpp"

namespace dkposc {

/// The two shipped variants of the quantization condition. They differ by
/// the multiplier of the lambda*chi term: "paper-literal" carries 4, the
/// standard parametric identity (2n+1)sqrt(c9) + c7 + 2 sqrt(c8 c9) = 0
/// applied to these coefficients yields 2. The finite-difference oracle
/// adjudicates which variant solves the radial equation; both stay callable.
enum class QuantizationMode { nu_standard, paper_literal };

/// Sign of the energy root searched for. Frame dragging (a > 0) breaks the
/// E -> -E symmetry through (aE + m)^2, so the branches are distinct states.
enum class Branch { positive, negative };

inline const char* to_string(QuantizationMode m) {
    return m == QuantizationMode::nu_standard ? "nu-standard" : "paper-literal";
}

inline const char* to_string(Branch b) {
    return b == Branch::positive ? "positive" : "negative";
}

inline QuantizationMode parse_mode(const std::string& s) {
    if (s == "nu-standard") return QuantizationMode::nu_standard;
    if (s == "paper-literal") return QuantizationMode::paper_literal;
    throw DomainError("unknown mode '" + s + "' (expected nu-standard or paper-literal)");
}

inline Branch parse_branch(const std::string& s) {
    if (s == "positive") return Branch::positive;
    if (s == "negative") return Branch::negative;
    throw DomainError("unknown branch '" + s + "' (expected positive or negative)");
}

/// Multiplier K of lambda*chi in g(E) = 2(2n+1)lambda - Lambda + K lambda chi.
inline double chi_term_factor(QuantizationMode m) {
    return m == QuantizationMode::paper_literal ? 4.0 : 2.0;
}

/// Coefficients of the parametric Nikiforov-Uvarov recipe for the reduced
/// equation in rho = r^2.
struct NuParameters {
    double xi1 = 0.0, xi2 = 0.0, xi3 = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0, c6 = 0.0, c7 = 0.0, c8 = 0.0,
           c9 = 0.0, c10 = 0.0, c11 = 0.0, c12 = 0.0, c13 = 0.0;
};

inline NuParameters nu_parameters(const ModelParams& params, double E) {
    const ModelParams p = validate(params);
    require_confining(p);
    const RadialNormalForm nf = normal_form(p, E);
    const double lam = nf.lambda_conf;
    NuParameters c;
    c.xi1 = 0.25 * lam * lam;
    c.xi2 = 0.25 * nf.Lambda;
    c.xi3 = 0.25 * nf.chi_sq;
    if (!(c.xi1 > 0.0)) {
        throw DegenerateError("Xi1 = (lambda/2)^2 must be > 0");
    }
    c.c1 = 1.0;
    c.c2 = c.c3 = c.c4 = c.c5 = 0.0;
    c.c6 = c.xi1;
    c.c7 = -c.xi2;
    c.c8 = c.xi3;
    c.c9 = c.xi1;
    c.c10 = 1.0 + 2.0 * std::sqrt(c.xi3);
    c.c11 = 2.0 * std::sqrt(c.xi1);
    c.c12 = std::sqrt(c.xi3);
    c.c13 = -std::sqrt(c.xi1);
    return c;
}

/// Residual of the quantization condition,
///     g(E) = 2(2n+1) lambda - Lambda(E) + K lambda chi(E),
/// with K = 2 (nu-standard) or K = 4 (paper-literal). A bound state at level
/// n is a root of g.
inline double quantization_residual(const ModelParams& params, int n, double E,
                                    QuantizationMode mode) {
    require_level(n);
    const ModelParams p = validate(params);
    require_confining(p);
    const RadialNormalForm nf = normal_form(p, E);
    const double lam = nf.lambda_conf;
    return 2.0 * (2.0 * n + 1.0) * lam - nf.Lambda + chi_term_factor(mode) * lam * chi_of(nf);
}

/// Magnitude scale of g(E) at E, for mixed absolute/relative tolerances.
inline double quantization_scale(const ModelParams& params, int n, double E,
                                 QuantizationMode mode) {
    const RadialNormalForm nf = normal_form(params, E);
    const double lam = nf.lambda_conf;
    return 2.0 * (2.0 * n + 1.0) * lam + std::abs(nf.Lambda) +
           chi_term_factor(mode) * lam * chi_of(nf);
}

namespace detail {

/// Real roots of the depressed cubic t^3 + p t + q = 0.
inline std::vector<double> real_roots_depressed_cubic(double p, double q) {
    std::vector<double> roots;
    if (p == 0.0 && q == 0.0) {
        roots.push_back(0.0);
        return roots;
    }
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        roots.push_back(std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s));
    } else if (disc == 0.0) {
        roots.push_back(3.0 * q / p);
        roots.push_back(-1.5 * q / p);
    } else {
        const double rho = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * rho);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg);
        for (int j = 0; j < 3; ++j) {
            roots.push_back(rho * std::cos((theta - 2.0 * M_PI * j) / 3.0));
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Real roots of the monic cubic x^3 + b2 x^2 + b1 x + b0 = 0.
inline std::vector<double> real_roots_cubic(double b2, double b1, double b0) {
    const double shift = b2 / 3.0;
    const double p = b1 - b2 * b2 / 3.0;
    const double q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
    std::vector<double> roots = real_roots_depressed_cubic(p, q);
    for (double& r : roots) r -= shift;
    return roots;
}

inline double eval_monic_quartic(const std::array<double, 5>& c, double x) {
    // c[j] multiplies x^j, c[4] == 1
    return (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0];
}

/// Machine-precision bisection of a continuous scalar function on a
/// bracketing interval (f(lo) and f(hi) of opposite sign, or zero).
template <class F>
inline double bisect(F&& f, double lo, double hi, double flo) {
    if (flo == 0.0) return lo;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if ((hi - lo) <= 2.0 * eps * std::max({std::abs(lo), std::abs(hi), 1e-300})) break;
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// All real roots of a monic quartic, ascending. Roots are isolated between
/// the critical points of the polynomial and resolved by bisection, so no
/// complex arithmetic is involved and near-multiple roots stay stable.
inline std::vector<double> real_roots_monic_quartic(const std::array<double, 5>& c) {
    // critical points: 4x^3 + 3c3 x^2 + 2c2 x + c1 = 0
    std::vector<double> crit =
        real_roots_cubic(0.75 * c[3], 0.5 * c[2], 0.25 * c[1]);

    const double bound =
        1.0 + std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
    std::vector<double> pts;
    pts.push_back(-bound);
    for (double x : crit) {
        if (x > -bound && x < bound) pts.push_back(x);
    }
    pts.push_back(bound);
    std::sort(pts.begin(), pts.end());

    const double scale = std::abs(c[0]) + std::abs(c[1]) * bound + std::abs(c[2]) * bound * bound +
                         std::abs(c[3]) * bound * bound * bound + bound * bound * bound * bound;

    std::vector<double> roots;
    auto push_root = [&](double x) {
        for (double r : roots) {
            if (std::abs(x - r) <= 1e-11 * std::max(1.0, std::abs(r))) return;
        }
        roots.push_back(x);
    };

    auto poly = [&c](double x) { return eval_monic_quartic(c, x); };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double f0 = poly(pts[i]);
        const double f1 = poly(pts[i + 1]);
        if (f0 == 0.0) push_root(pts[i]);
        if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
            push_root(bisect(poly, pts[i], pts[i + 1], f0));
        }
    }
    if (!pts.empty() && poly(pts.back()) == 0.0) push_root(pts.back());
    // tangent (double) roots sit at critical points where the quartic grazes zero
    for (double x : crit) {
        if (std::abs(poly(x)) <= 1e-12 * scale) push_root(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

struct SolveOptions {
    double e_max = 0.0;           ///< search bound; 0 selects 1e3*max(M, sqrt(lambda(2n+3)))
    double residual_tol = 1e-12;  ///< mixed abs/rel tolerance on g at an accepted root
    double scan_ratio = 1.05;     ///< geometric scan ratio outward from E = 0
};

/// A solved bound-state energy with its diagnostics.
struct EnergySolution {
    int n = 0;
    QuantizationMode mode = QuantizationMode::nu_standard;
    Branch branch = Branch::positive;
    double energy = 0.0;
    double residual = 0.0;           ///< |g(E)| at the solution
    double quartic_agreement = 0.0;  ///< distance to the nearest accepted quartic root
};

/// One real root of the squared (quartic) form of the condition, flagged by
/// whether it satisfies the pre-squaring sign constraint
/// Lambda(E) - 2(2n+1) lambda >= 0 and whether g(E) itself vanishes.
struct QuarticRoot {
    double energy = 0.0;
    bool sign_constraint_ok = false;
    bool residual_ok = false;
};

struct QuarticReduction {
    std::array<double, 5> coeffs{};  ///< monic; coeffs[j] multiplies E^j
    std::vector<QuarticRoot> roots;  ///< ascending by energy
};

namespace detail {

inline bool sign_constraint_holds(const ModelParams& p, int n, double E) {
    const RadialNormalForm nf = normal_form(p, E);
    const double lhs = nf.Lambda - 2.0 * (2.0 * n + 1.0) * nf.lambda_conf;
    return lhs >= -1e-9 * std::max(1.0, std::abs(nf.Lambda));
}

}  // namespace detail

/// Moves the chi term of g(E) = 0 across and squares, yielding the monic
/// quartic (Lambda(E) - 2(2n+1)lambda)^2 - K^2 lambda^2 chi^2(E) = 0.
/// Squaring introduces sign-flipped impostor roots; the flags identify them.
inline QuarticReduction quartic_reduction(const ModelParams& params, int n, QuantizationMode mode,
                                          double residual_tol = 1e-8) {
    require_level(n);
    const ModelParams p = validate(params);
    require_confining(p);
    const double lam = lambda_conf(p);
    const double K = chi_term_factor(mode);
    const double Mw = p.M * p.omega;
    const double a2 = p.alpha * p.alpha;
    const double md = static_cast<double>(p.m);

    // Lambda(E) = E^2 + beta + 2(2n+1)lambda with beta as below;
    // chi^2(E) = (a^2/alpha^2) E^2 + (2 a m/alpha^2) E + chi0.
    const double beta = -p.M * p.M - p.k * p.k - p.delta1 * Mw / p.alpha + 2.0 * p.delta1 * Mw -
                        2.0 * p.delta1 * p.delta2 * Mw * Mw - 2.0 * (2.0 * n + 1.0) * lam;
    const double chi0 = p.delta2 * p.delta2 * Mw * Mw + 1.0 / (4.0 * a2) + md * md / a2 +
                        p.delta2 * Mw / p.alpha;
    const double K2l2 = K * K * lam * lam;

    QuarticReduction red;
    red.coeffs[4] = 1.0;
    red.coeffs[3] = 0.0;
    red.coeffs[2] = 2.0 * beta - K2l2 * p.a * p.a / a2;
    red.coeffs[1] = -2.0 * K2l2 * p.a * md / a2;
    red.coeffs[0] = beta * beta - K2l2 * chi0;

    for (double E : detail::real_roots_monic_quartic(red.coeffs)) {
        QuarticRoot root;
        root.energy = E;
        root.sign_constraint_ok = detail::sign_constraint_holds(p, n, E);
        const double g = quantization_residual(p, n, E, mode);
        root.residual_ok =
            std::abs(g) <= residual_tol * std::max(1.0, quantization_scale(p, n, E, mode));
        red.roots.push_back(root);
    }
    return red;
}

/// All roots of g on the given branch, found by scanning a geometric energy
/// grid outward from E = 0 for sign changes and bisecting each bracket.
inline std::vector<double> scan_energy_roots(const ModelParams& params, int n,
                                             QuantizationMode mode, Branch branch,
                                             const SolveOptions& opts = {}) {
    require_level(n);
    const ModelParams p = validate(params);
    require_confining(p);
    const double lam = lambda_conf(p);
    const double e_ref = std::max(p.M, std::sqrt(lam * (2.0 * n + 3.0)));
    const double e_max = opts.e_max > 0.0 ? opts.e_max : 1e3 * e_ref;
    const double sign = branch == Branch::positive ? 1.0 : -1.0;

    auto g = [&](double E) { return quantization_residual(p, n, E, mode); };

    std::vector<double> grid;
    grid.push_back(0.0);
    for (double e = 1e-6 * e_ref; e <= e_max; e *= opts.scan_ratio) {
        grid.push_back(sign * e);
    }
    if (std::abs(grid.back()) < e_max) grid.push_back(sign * e_max);

    std::vector<double> roots;
    double prev_e = grid[0];
    double prev_g = g(prev_e);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur_e = grid[i];
        const double cur_g = g(cur_e);
        if (cur_g == 0.0) {
            roots.push_back(cur_e);
        } else if ((prev_g < 0.0 && cur_g > 0.0) || (prev_g > 0.0 && cur_g < 0.0)) {
            const double lo = std::min(prev_e, cur_e);
            const double hi = std::max(prev_e, cur_e);
            roots.push_back(detail::bisect(g, lo, hi, g(lo)));
        }
        prev_e = cur_e;
        prev_g = cur_g;
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) {
                                return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
                            }),
                roots.end());
    return roots;
}

/// Solves g(E) = 0 for the requested level, mode and branch. Returns the
/// largest-|E| root of the requested sign that satisfies the pre-squaring
/// sign constraint; every returned root is cross-checked against the quartic
/// reduction (quartic_agreement records the distance).
inline EnergySolution solve_energy(const ModelParams& params, int n, QuantizationMode mode,
                                   Branch branch, const SolveOptions& opts = {}) {
    const ModelParams p = validate(params);
    std::vector<double> candidates = scan_energy_roots(p, n, mode, branch, opts);

    std::vector<double> accepted;
    for (double E : candidates) {
        if (branch == Branch::positive && !(E > 0.0)) continue;
        if (branch == Branch::negative && !(E < 0.0)) continue;
        if (!detail::sign_constraint_holds(p, n, E)) continue;
        const double g = std::abs(quantization_residual(p, n, E, mode));
        if (g > opts.residual_tol * std::max(1.0, quantization_scale(p, n, E, mode))) continue;
        accepted.push_back(E);
    }
    if (accepted.empty()) {
        const double lam = lambda_conf(p);
        const double e_ref = std::max(p.M, std::sqrt(lam * (2.0 * n + 3.0)));
        const double e_max = opts.e_max > 0.0 ? opts.e_max : 1e3 * e_ref;
        throw NoRootError(std::string("no ") + to_string(branch) + "-branch root of the " +
                          to_string(mode) + " condition for n=" + std::to_string(n) +
                          " within |E| <= " + std::to_string(e_max));
    }

    EnergySolution sol;
    sol.n = n;
    sol.mode = mode;
    sol.branch = branch;
    sol.energy = branch == Branch::positive ? *std::max_element(accepted.begin(), accepted.end())
                                            : *std::min_element(accepted.begin(), accepted.end());
    sol.residual = std::abs(quantization_residual(p, n, sol.energy, mode));

    sol.quartic_agreement = std::numeric_limits<double>::infinity();
    for (const QuarticRoot& qr : quartic_reduction(p, n, mode).roots) {
        if (!qr.sign_constraint_ok || !qr.residual_ok) continue;
        sol.quartic_agreement = std::min(sol.quartic_agreement, std::abs(qr.energy - sol.energy));
    }
    return sol;
}

}  // namespace dkposc
