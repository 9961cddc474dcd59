#pragma once

#include <cmath>
#include <string>

#include "dkposc/errors.hpp"

namespace dkposc {

/// All physical and geometric constants of the system, in natural units
/// (hbar = c = 1). Single source of truth for every symbol used downstream.
struct ModelParams {
    double M = 1.0;       ///< mass (dimension of inverse length)
    double omega = 1.0;   ///< oscillator frequency, >= 0
    double k = 0.0;       ///< axial wave number
    int m = 0;            ///< magnetic quantum number (may be negative)
    double alpha = 1.0;   ///< angular deficit parameter, in (0, 1]
    double a = 1.0;       ///< spinning-string parameter (4GJ), >= 0
    double delta1 = 1.0;  ///< linear coupling strength, >= 0
    double delta2 = 1.0;  ///< inverse coupling strength, >= 0
};

struct QuantumNumbers {
    int n = 0;  ///< radial quantum number, >= 0
    int m = 0;  ///< duplicated from ModelParams for call-site clarity
};

/// Confinement scale lambda = delta1*M*omega; enters the reduced radial
/// equation as lambda^2 r^2. Must be > 0 for any spectrum computation.
inline double lambda_conf(const ModelParams& p) {
    return p.delta1 * p.M * p.omega;
}

namespace detail {

inline void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

}  // namespace detail

/// Checks every ModelParams invariant; returns the parameters unchanged.
/// Throws DomainError naming the violated field.
inline ModelParams validate(const ModelParams& p) {
    detail::require_finite(p.M, "M");
    detail::require_finite(p.omega, "omega");
    detail::require_finite(p.k, "k");
    detail::require_finite(p.alpha, "alpha");
    detail::require_finite(p.a, "a");
    detail::require_finite(p.delta1, "delta1");
    detail::require_finite(p.delta2, "delta2");
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1], got " + std::to_string(p.alpha));
    }
    if (!(p.M > 0.0)) {
        throw DomainError("M must be > 0, got " + std::to_string(p.M));
    }
    if (p.omega < 0.0) {
        throw DomainError("omega must be >= 0, got " + std::to_string(p.omega));
    }
    if (p.a < 0.0) {
        throw DomainError("a must be >= 0, got " + std::to_string(p.a));
    }
    if (p.delta1 < 0.0) {
        throw DomainError("delta1 must be >= 0, got " + std::to_string(p.delta1));
    }
    if (p.delta2 < 0.0) {
        throw DomainError("delta2 must be >= 0, got " + std::to_string(p.delta2));
    }
    return p;
}

/// Spectrum operations need a strictly positive confinement scale; with
/// delta1*M*omega = 0 the parametric map degenerates (c9 = 0).
inline void require_confining(const ModelParams& p) {
    if (!(lambda_conf(p) > 0.0)) {
        throw DegenerateError("lambda = delta1*M*omega must be > 0 for spectrum operations, got " +
                              std::to_string(lambda_conf(p)));
    }
}

inline void require_level(int n) {
    if (n < 0) {
        throw DomainError("radial quantum number n must be >= 0, got " + std::to_string(n));
    }
}

inline QuantumNumbers validate(const QuantumNumbers& q) {
    require_level(q.n);
    return q;
}

/// Cornell coupling f(r) = delta1*r + delta2/r.
inline double cornell_f(const ModelParams& p, double r) {
    if (!(r > 0.0)) {
        throw DomainError("r must be > 0, got " + std::to_string(r));
    }
    return p.delta1 * r + p.delta2 / r;
}

/// f'(r) = delta1 - delta2/r^2.
inline double cornell_f_prime(const ModelParams& p, double r) {
    if (!(r > 0.0)) {
        throw DomainError("r must be > 0, got " + std::to_string(r));
    }
    return p.delta1 - p.delta2 / (r * r);
}

}  // namespace dkposc
