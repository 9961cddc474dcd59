#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace dkposc {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  ///< estimated absolute error
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 pair; abscissae/weights from the standard tables.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr double kGk15KronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kGk15GaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(F& f, double a, double b, double& value, double& error) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double result_gauss = kGk15GaussWeights[3] * fc;
    double result_kronrod = kGk15KronrodWeights[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kGk15Nodes[j];
        const double fsum = f(center - dx) + f(center + dx);
        result_kronrod += kGk15KronrodWeights[j] * fsum;
        if (j % 2 == 1) {
            result_gauss += kGk15GaussWeights[j / 2] * fsum;
        }
    }
    value = result_kronrod * half;
    error = std::abs((result_kronrod - result_gauss) * half);
}

struct QuadSegment {
    double a, b, value, error;
    bool operator<(const QuadSegment& o) const { return error < o.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 15-point quadrature of f over [a, b].
/// Splits the interval with the largest error estimate until
/// sum(err) <= max(abs_tol, rel_tol*|sum(value)|) or the segment budget is
/// exhausted. The integrand must be finite on (a, b); endpoints are never
/// evaluated exactly.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_tol = 0.0, std::size_t max_segments = 4000) {
    QuadratureResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<detail::QuadSegment> segments;
    detail::QuadSegment whole{a, b, 0.0, 0.0};
    detail::gk15(f, a, b, whole.value, whole.error);
    res.evaluations = 15;
    segments.push(whole);
    double total_value = whole.value;
    double total_error = whole.error;

    const double eps = std::numeric_limits<double>::epsilon();
    while (segments.size() < max_segments) {
        if (total_error <= std::max(abs_tol, rel_tol * std::abs(total_value))) {
            res.converged = true;
            break;
        }
        detail::QuadSegment worst = segments.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) <= 8.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            break;  // cannot refine further
        }
        segments.pop();
        detail::QuadSegment left{worst.a, mid, 0.0, 0.0};
        detail::QuadSegment right{mid, worst.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        res.evaluations += 30;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
    }
    if (total_error <= std::max(abs_tol, rel_tol * std::abs(total_value))) {
        res.converged = true;
    }
    res.value = total_value;
    res.error = total_error;
    return res;
}

}  // namespace dkposc
