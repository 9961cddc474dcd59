#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dkposc/errors.hpp"
#include "dkposc/laguerre.hpp"
#include "dkposc/model.hpp"
#include "dkposc/quadrature.hpp"
#include "dkposc/radial.hpp"

namespace dkposc {

/// The printed closed form of the bound state and the form implied by the
/// normal-form reduction differ (prefactor, square root of the exponent,
/// delta1 vs delta2 inside it). Both are shipped; "reduced-consistent" is
/// the one that is residual-checked against the radial equation.
enum class WavefunctionConvention { reduced_consistent, paper_literal };

inline const char* to_string(WavefunctionConvention c) {
    return c == WavefunctionConvention::reduced_consistent ? "reduced-consistent"
                                                           : "paper-literal";
}

struct WavefunctionSpec {
    ModelParams params;
    int n = 0;
    double energy = 0.0;  ///< a solved eigenvalue for (params, n) in the matching mode
    WavefunctionConvention convention = WavefunctionConvention::reduced_consistent;
    double theta = 0.0;        ///< exponent actually used (chi or the printed Theta)
    double lambda_conf = 0.0;  ///< lambda
};

inline WavefunctionSpec make_wavefunction_spec(const ModelParams& params, int n, double E,
                                               WavefunctionConvention convention) {
    require_level(n);
    const ModelParams p = validate(params);
    require_confining(p);
    WavefunctionSpec spec;
    spec.params = p;
    spec.n = n;
    spec.energy = E;
    spec.convention = convention;
    spec.lambda_conf = lambda_conf(p);
    if (convention == WavefunctionConvention::reduced_consistent) {
        spec.theta = chi_of(normal_form(p, E));
    } else {
        const double Mw = p.M * p.omega;
        const double am = p.a * E + static_cast<double>(p.m);
        spec.theta = p.delta2 * p.delta2 * Mw * Mw + 1.0 / (4.0 * p.alpha * p.alpha) +
                     am * am / (p.alpha * p.alpha) + p.delta1 * Mw / p.alpha;
    }
    if (!(spec.theta > 0.0)) {
        throw DomainError("wavefunction exponent must be > 0, got " + std::to_string(spec.theta));
    }
    return spec;
}

/// Radial wavefunction of the first spinor component.
///   reduced-consistent: r^(1/(2 alpha)) (lambda r^2)^(chi/2) e^(-lambda r^2/2) L_n^chi(lambda r^2)
///   paper-literal:      r^Theta e^(-lambda r^2/2) L_n^Theta(lambda r^2)
/// The prefactors are evaluated in log space so large exponents cannot
/// overflow before the Gaussian wins.
inline double radial_wavefunction(const WavefunctionSpec& spec, double r) {
    if (!(r > 0.0)) {
        throw DomainError("r must be > 0, got " + std::to_string(r));
    }
    const double lam = spec.lambda_conf;
    const double x = lam * r * r;
    double log_prefactor;
    if (spec.convention == WavefunctionConvention::reduced_consistent) {
        const double s = 1.0 / (2.0 * spec.params.alpha);
        log_prefactor = s * std::log(r) + 0.5 * spec.theta * std::log(x) - 0.5 * x;
    } else {
        log_prefactor = spec.theta * std::log(r) - 0.5 * x;
    }
    return std::exp(log_prefactor) * laguerre(spec.n, spec.theta, x);
}

/// Uniform radial grid for the residual and node diagnostics.
struct ResidualGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    double h = 0.0;
};

/// Grid that covers the classically allowed region of the state and stays
/// clear of the fractional-power behaviour at the origin.
inline ResidualGrid default_residual_grid(const WavefunctionSpec& spec, double h) {
    const double lam = spec.lambda_conf;
    const double turn = std::sqrt(2.0 * (2.0 * spec.n + 1.0 + spec.theta) / lam);
    ResidualGrid g;
    g.r_min = 0.3 / std::sqrt(lam);
    g.r_max = turn + 3.0 / std::sqrt(lam);
    g.h = h;
    return g;
}

/// Applies the full radial operator Phi'' + p(r) Phi' + q(r, E) Phi to the
/// sampled wavefunction with fourth-order central stencils and returns
/// max |L Phi| / max |Phi| over the interior grid. Converges as O(h^4) to 0
/// for a convention/energy pair that actually solves the equation.
inline double residual_check(const WavefunctionSpec& spec, const ResidualGrid& grid) {
    if (!(grid.r_min > 0.0) || !(grid.r_max > grid.r_min) || !(grid.h > 0.0)) {
        throw DomainError("residual grid must satisfy 0 < r_min < r_max, h > 0");
    }
    const std::size_t count = static_cast<std::size_t>((grid.r_max - grid.r_min) / grid.h) + 1;
    if (count < 5) {
        throw DomainError("residual grid has fewer than 5 points");
    }
    const ModelParams& p = spec.params;
    const double h = grid.h;

    std::vector<double> phi(count);
    for (std::size_t j = 0; j < count; ++j) {
        phi[j] = radial_wavefunction(spec, grid.r_min + static_cast<double>(j) * h);
    }
    double phi_max = 0.0;
    for (double v : phi) phi_max = std::max(phi_max, std::abs(v));
    if (phi_max == 0.0) return 0.0;

    double worst = 0.0;
    for (std::size_t j = 2; j + 2 < count; ++j) {
        const double r = grid.r_min + static_cast<double>(j) * h;
        const double d2 =
            (-phi[j + 2] + 16.0 * phi[j + 1] - 30.0 * phi[j] + 16.0 * phi[j - 1] - phi[j - 2]) /
            (12.0 * h * h);
        const double d1 =
            (-phi[j + 2] + 8.0 * phi[j + 1] - 8.0 * phi[j - 1] + phi[j - 2]) / (12.0 * h);
        const double lphi = d2 + (p.alpha - 1.0) / (r * p.alpha) * d1 +
                            cornell_q_expanded(p, r, spec.energy) * phi[j];
        worst = std::max(worst, std::abs(lphi));
    }
    return worst / phi_max;
}

namespace detail {

/// N such that the weighted square integral of N*f over (0, r_max] is 1.
template <class F>
double normalization_constant(F&& f, double weight_alpha, double lambda, double r_max,
                              double rel_tol) {
    auto integrand = [&](double r) {
        const double v = f(r);
        return weight_alpha * r * v * v;
    };
    const QuadratureResult res = integrate_adaptive(integrand, 0.0, r_max, rel_tol);
    if (!res.converged || !(res.value > 0.0)) {
        throw QuadratureError("normalization quadrature did not reach relative tolerance " +
                              std::to_string(rel_tol));
    }
    const double tail_bound = integrand(r_max) / (lambda * r_max);
    if (tail_bound > 1e-14 * res.value) {
        throw QuadratureError("r_max too small: Gaussian tail estimate " +
                              std::to_string(tail_bound / res.value) +
                              " of the integral exceeds 1e-14");
    }
    return 1.0 / std::sqrt(res.value);
}

}  // namespace detail

/// Normalization constant N with the spatial measure alpha*r*dr of the
/// metric volume element: integral of |N Phi|^2 alpha r dr over (0, r_max]
/// equals 1. Adaptive quadrature to relative tolerance 1e-10.
inline double normalize(const WavefunctionSpec& spec, double r_max) {
    return detail::normalization_constant([&](double r) { return radial_wavefunction(spec, r); },
                                          spec.params.alpha, spec.lambda_conf, r_max, 1e-10);
}

struct NodeGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    int points = 0;
};

/// Node-resolving default: at least 200 samples per expected node spacing.
inline NodeGrid default_node_grid(const WavefunctionSpec& spec) {
    const ResidualGrid rg = default_residual_grid(spec, 0.0);
    NodeGrid g;
    g.r_min = 1e-3 / std::sqrt(spec.lambda_conf);
    g.r_max = rg.r_max;
    g.points = std::max(2000, 200 * (spec.n + 1));
    return g;
}

/// Number of strict sign changes of Phi sampled on the grid. Exact zeros are
/// skipped; an under-resolved grid may undercount (see default_node_grid).
inline int count_nodes(const WavefunctionSpec& spec, const NodeGrid& grid) {
    if (!(grid.r_min > 0.0) || !(grid.r_max > grid.r_min) || grid.points < 2) {
        throw DomainError("node grid must satisfy 0 < r_min < r_max and points >= 2");
    }
    int changes = 0;
    int prev_sign = 0;
    for (int j = 0; j < grid.points; ++j) {
        const double r = grid.r_min + (grid.r_max - grid.r_min) * static_cast<double>(j) /
                                          static_cast<double>(grid.points - 1);
        const double v = radial_wavefunction(spec, r);
        const int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (prev_sign != 0 && sign != prev_sign) ++changes;
        prev_sign = sign;
    }
    return changes;
}

}  // namespace dkposc
