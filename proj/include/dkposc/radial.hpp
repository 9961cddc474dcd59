#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "dkposc/errors.hpp"
#include "dkposc/model.hpp"

namespace dkposc {

/// Coefficients of the second-order radial equation
///     Phi'' + p(r) Phi' + q(r, E) Phi = 0
/// for the first spinor component. p depends only on the geometry,
/// q carries the coupling and the energy.
struct RadialCoefficients {
    std::function<double(double)> p;          ///< first-derivative coefficient
    std::function<double(double, double)> q;  ///< zeroth-order coefficient, q(r, E)
};

/// Builds the radial coefficients for an arbitrary coupling f(r). f and its
/// derivative are passed as separate callables; nothing is differentiated
/// numerically, so algebraic identity checks hold to machine precision.
inline RadialCoefficients phi_coefficients(const ModelParams& params,
                                           std::function<double(double)> f,
                                           std::function<double(double)> f_prime) {
    const ModelParams p = validate(params);
    const double Mw = p.M * p.omega;
    RadialCoefficients c;
    c.p = [p](double r) {
        if (!(r > 0.0)) throw DomainError("r must be > 0");
        return (p.alpha - 1.0) / (r * p.alpha);
    };
    c.q = [p, Mw, f = std::move(f), fp = std::move(f_prime)](double r, double E) {
        if (!(r > 0.0)) throw DomainError("r must be > 0");
        const double fr = f(r);
        const double am = p.a * E + static_cast<double>(p.m);
        return E * E - p.M * p.M - p.k * p.k - Mw * Mw * fr * fr + Mw * fr / r -
               Mw * fr / (r * p.alpha) - am * am / (r * r * p.alpha * p.alpha) + Mw * fp(r);
    };
    return c;
}

/// Radial coefficients with the Cornell coupling plugged into the general form.
inline RadialCoefficients cornell_coefficients(const ModelParams& params) {
    const ModelParams p = validate(params);
    return phi_coefficients(
        p, [p](double r) { return cornell_f(p, r); },
        [p](double r) { return cornell_f_prime(p, r); });
}

/// q(r, E) for the Cornell coupling, written with the expanded coefficients
/// (linear, inverse-square and constant pieces collected). Serves as the
/// algebraic cross-check of the general form.
inline double cornell_q_expanded(const ModelParams& p, double r, double E) {
    if (!(r > 0.0)) throw DomainError("r must be > 0");
    const double Mw = p.M * p.omega;
    const double am = p.a * E + static_cast<double>(p.m);
    const double r2 = r * r;
    return E * E - p.M * p.M - p.k * p.k - p.delta1 * p.delta1 * Mw * Mw * r2 -
           p.delta2 * Mw / (r2 * p.alpha) - p.delta1 * Mw / p.alpha -
           am * am / (r2 * p.alpha * p.alpha) + 2.0 * p.delta1 * Mw -
           2.0 * p.delta1 * p.delta2 * Mw * Mw - p.delta2 * p.delta2 * Mw * Mw / r2;
}

/// |q_general(r, E; cornell) - q_expanded(r, E)|. Identically zero up to
/// rounding; property-tested as such.
inline double cornell_expansion_check(const ModelParams& params, double r, double E) {
    const ModelParams p = validate(params);
    const RadialCoefficients c = cornell_coefficients(p);
    return std::abs(c.q(r, E) - cornell_q_expanded(p, r, E));
}

/// Data of the reduced oscillator equation obtained from the substitution
/// Phi = r^s zeta with s = 1/(2 alpha):
///     zeta'' + zeta'/r + (Lambda - lambda^2 r^2 - chi^2/r^2) zeta = 0.
/// Lambda bundles the r-independent terms, chi^2 the 1/r^2 terms (including
/// the 1/(4 alpha^2) generated by the substitution). chi^2 is kept squared;
/// the branch of the square root is chosen only at the quantization step.
struct RadialNormalForm {
    double lambda_conf = 0.0;         ///< lambda = delta1*M*omega
    double Lambda = 0.0;              ///< E-dependent energy bundle
    double chi_sq = 0.0;              ///< E-dependent centrifugal strength
    double prefactor_exponent = 0.0;  ///< s = 1/(2 alpha)
};

inline RadialNormalForm normal_form(const ModelParams& params, double E) {
    const ModelParams p = validate(params);
    const double Mw = p.M * p.omega;
    const double lam = lambda_conf(p);
    const double am = p.a * E + static_cast<double>(p.m);
    RadialNormalForm nf;
    nf.lambda_conf = lam;
    nf.Lambda = E * E - p.M * p.M - p.k * p.k - p.delta1 * Mw / p.alpha + 2.0 * p.delta1 * Mw -
                2.0 * p.delta1 * p.delta2 * Mw * Mw;
    nf.chi_sq = p.delta2 * p.delta2 * Mw * Mw + 1.0 / (4.0 * p.alpha * p.alpha) +
                am * am / (p.alpha * p.alpha) + p.delta2 * Mw / p.alpha;
    nf.prefactor_exponent = 1.0 / (2.0 * p.alpha);
    return nf;
}

/// chi = +sqrt(chi^2); well defined for all real E under validated
/// parameters (chi^2 is a sum of nonnegative terms plus 1/(4 alpha^2) > 0).
inline double chi_of(const RadialNormalForm& nf) {
    return std::sqrt(nf.chi_sq);
}

/// r_max heuristic covering both the centrifugal inner region and the
/// Gaussian tail at ~1e-7 truncation.
inline double confinement_r_max(double lambda, double chi) {
    return 10.0 / std::sqrt(lambda) + 5.0 * std::sqrt(chi / lambda);
}

}  // namespace dkposc
