#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dkposc/model.hpp"
#include "dkposc/radial.hpp"

using namespace dkposc;
using Catch::Approx;

namespace {

ModelParams all_unit() {
    ModelParams p;
    p.M = 1.0;
    p.omega = 1.0;
    p.k = 1.0;
    p.m = 1;
    p.alpha = 1.0;
    p.a = 1.0;
    p.delta1 = 1.0;
    p.delta2 = 1.0;
    return p;
}

ModelParams limit_case() {
    ModelParams p;
    p.M = 1.0;
    p.omega = 1.0;
    p.k = 0.0;
    p.m = 0;
    p.alpha = 1.0;
    p.a = 0.0;
    p.delta1 = 1.0;
    p.delta2 = 0.0;
    return p;
}

ModelParams random_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    ModelParams p;
    p.M = 0.5 + u01(rng);
    p.omega = 0.5 + 1.5 * u01(rng);
    p.k = u01(rng);
    p.m = static_cast<int>(u01(rng) * 5.0) - 2;
    p.alpha = 0.3 + 0.7 * u01(rng);
    p.a = u01(rng);
    p.delta1 = 0.5 + 1.5 * u01(rng);
    p.delta2 = 2.0 * u01(rng);
    return p;
}

}  // namespace

TEST_CASE("first-derivative coefficient vanishes at alpha = 1") {
    const RadialCoefficients c = cornell_coefficients(all_unit());
    for (double r : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        CHECK(c.p(r) == 0.0);
    }
    ModelParams p = all_unit();
    p.alpha = 0.5;
    const RadialCoefficients c2 = cornell_coefficients(p);
    CHECK(c2.p(2.0) == Approx((0.5 - 1.0) / (2.0 * 0.5)));
    CHECK_THROWS_AS(c2.p(0.0), DomainError);
}

TEST_CASE("free radial limit: f = 0, a = 0 leaves the centrifugal term") {
    ModelParams p = all_unit();
    p.a = 0.0;
    p.m = 2;
    const RadialCoefficients c =
        phi_coefficients(p, [](double) { return 0.0; }, [](double) { return 0.0; });
    const double r = 0.7, E = 1.3;
    CHECK(c.q(r, E) == Approx(E * E - p.M * p.M - p.k * p.k - 4.0 / (r * r)).epsilon(1e-14));
}

TEST_CASE("q at the unit point, both magnetic quantum numbers") {
    // With every parameter 1 the q breakdown at (r=1, E=2) is
    // 4 - 1 - 1 - 4 + 0 - (2a+m)^2 + 0.
    const RadialCoefficients c = cornell_coefficients(all_unit());
    CHECK(c.q(1.0, 2.0) == Approx(-11.0).epsilon(1e-14));  // (aE+m)^2 = 9 at m = 1
    ModelParams p = all_unit();
    p.m = 0;
    const RadialCoefficients c0 = cornell_coefficients(p);
    CHECK(c0.q(1.0, 2.0) == Approx(-6.0).epsilon(1e-14));  // (aE+m)^2 = 4 at m = 0
    CHECK_THROWS_AS(c.q(-1.0, 2.0), DomainError);
}

TEST_CASE("expanded Cornell coefficients are an algebraic identity") {
    CHECK(cornell_expansion_check(all_unit(), 1.0, 2.0) <= 1e-14);
    ModelParams p = all_unit();
    p.alpha = 0.5;
    CHECK(cornell_expansion_check(p, 0.7, 1.3) <= 1e-13);
    p = all_unit();
    p.delta2 = 0.0;
    CHECK(cornell_expansion_check(p, 0.31, -2.7) <= 1e-13);
}

TEST_CASE("expansion identity holds over 1000 random points") {
    std::mt19937 rng(7771);
    std::uniform_real_distribution<double> radius(0.2, 5.0);
    std::uniform_real_distribution<double> energy(-5.0, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const ModelParams p = random_params(rng);
        const double r = radius(rng);
        const double E = energy(rng);
        CHECK(cornell_expansion_check(p, r, E) <= 1e-10);
    }
}

TEST_CASE("normal form at the unit point") {
    const RadialNormalForm nf = normal_form(all_unit(), 2.0);
    CHECK(nf.lambda_conf == 1.0);
    CHECK(nf.Lambda == Approx(1.0).margin(1e-14));      // 4 - 1 - 1 - 1 + 2 - 2
    CHECK(nf.chi_sq == Approx(11.25).margin(1e-14));    // 1 + 1/4 + 9 + 1
    CHECK(nf.prefactor_exponent == 0.5);
}

TEST_CASE("normal form in the flat uncoupled limit") {
    const ModelParams p = limit_case();
    for (double E : {0.3, 1.0, 1.7, 2.9}) {
        const RadialNormalForm nf = normal_form(p, E);
        CHECK(nf.Lambda == Approx(E * E).margin(1e-15));
        CHECK(nf.chi_sq == 0.25);
    }
}

TEST_CASE("chi^2 is positive for every real energy") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> energy(-20.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        const ModelParams p = random_params(rng);
        CHECK(normal_form(p, energy(rng)).chi_sq > 0.0);
    }
}

TEST_CASE("chi^2 is an upward parabola in E with vertex at -m/a") {
    ModelParams p = all_unit();
    p.a = 0.8;
    p.m = -2;
    const double vertex = -static_cast<double>(p.m) / p.a;
    const double d = 0.37;
    const double lo = normal_form(p, vertex - d).chi_sq;
    const double mid = normal_form(p, vertex).chi_sq;
    const double hi = normal_form(p, vertex + d).chi_sq;
    CHECK(lo == Approx(hi).epsilon(1e-12));
    CHECK(mid < lo);
    CHECK(lo + hi - 2.0 * mid > 0.0);  // upward curvature
}

namespace {

// Fourth-order central stencils for the substitution identity check.
double d1_stencil(const std::vector<double>& f, std::size_t i, double h) {
    return (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
}

double d2_stencil(const std::vector<double>& f, std::size_t i, double h) {
    return (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) /
           (12.0 * h * h);
}

}  // namespace

TEST_CASE("prefactor substitution induces exactly -1/(4 alpha^2 r^2)") {
    // Sample Phi = r^s zeta for a smooth zeta; the difference between the
    // Phi-side derivative bundle and the zeta-side one must be the induced
    // 1/r^2 coefficient.
    auto zeta = [](double r) { return std::exp(-0.5 * r * r) * (1.0 + 0.3 * r * r); };
    const double h = 1e-3;
    for (double alpha : {0.35, 0.6, 1.0}) {
        const double s = 1.0 / (2.0 * alpha);
        for (double r : {0.6, 1.1, 2.3}) {
            std::vector<double> phi(5), zet(5);
            for (int j = -2; j <= 2; ++j) {
                const double rj = r + j * h;
                zet[j + 2] = zeta(rj);
                phi[j + 2] = std::pow(rj, s) * zeta(rj);
            }
            const double lhs = (d2_stencil(phi, 2, h) +
                                (alpha - 1.0) / (r * alpha) * d1_stencil(phi, 2, h)) /
                               std::pow(r, s);
            const double rhs = d2_stencil(zet, 2, h) + d1_stencil(zet, 2, h) / r;
            const double induced = (lhs - rhs) * r * r / zeta(r);
            CHECK(induced == Approx(-1.0 / (4.0 * alpha * alpha)).margin(1e-8));
        }
    }
}

TEST_CASE("confinement radius heuristic scales with the problem") {
    CHECK(confinement_r_max(1.0, 0.5) == Approx(10.0 + 5.0 * std::sqrt(0.5)));
    CHECK(confinement_r_max(4.0, 1.0) < confinement_r_max(1.0, 1.0));
}
