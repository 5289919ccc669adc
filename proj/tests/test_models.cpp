#include <doctest.h>

#include <cmath>

#include "contactdg/models.hpp"
#include "contactdg/scalar_field.hpp"

using namespace contactdg;

namespace {

// Finite-difference check of the model's analytic gradient.
void check_gradient(const ModelSpec& model, const Vec& x, double tol) {
    const Covector analytic = model.energy.gradient(x);
    const Covector fd = central_difference_gradient(model.energy.value, x, 1e-6);
    REQUIRE(analytic.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(analytic[i] == doctest::Approx(fd[i]).epsilon(tol));
}

}  // namespace

TEST_CASE("potential builders evaluate value and gradient") {
    const Potential V = harmonic_potential(4.0, 2);
    const Vec q{1.0, -1.0};
    CHECK(V.value(q) == doctest::Approx(4.0));  // 4/2 * (1 + 1)
    const Vec g = V.grad(q);
    CHECK(g[0] == doctest::Approx(4.0));
    CHECK(g[1] == doctest::Approx(-4.0));

    const Potential Z = zero_potential(3);
    CHECK(Z.value(Vec{1.0, 2.0, 3.0}) == 0.0);
    CHECK(norm_inf(Z.grad(Vec{1.0, 2.0, 3.0})) == 0.0);
}

TEST_CASE("damped system energy, gradient, and bath temperature") {
    const ModelSpec model = damped_system(2.0, 0.3, 2, harmonic_potential(4.0, 2));
    CHECK(model.dim() == 5);
    CHECK_FALSE(model.composed());

    // H = |p|^2/(2m) + k/2 |q|^2 + gamma S at (q,p,S) = ((1,-1),(2,4),5).
    const Vec x{1.0, -1.0, 2.0, 4.0, 5.0};
    CHECK(model.energy(x) == doctest::Approx(5.0 + 4.0 + 1.5).epsilon(1e-15));

    const Covector g = model.energy.gradient(x);
    CHECK(g[0] == doctest::Approx(4.0));   // k q1
    CHECK(g[1] == doctest::Approx(-4.0));  // k q2
    CHECK(g[2] == doctest::Approx(1.0));   // p1/m
    CHECK(g[3] == doctest::Approx(2.0));   // p2/m
    CHECK(g[4] == doctest::Approx(0.3));   // gamma
    check_gradient(model, x, 1e-7);

    // The bath temperature is the friction coefficient, state-independent.
    CHECK(temperature(model, x, 0) == doctest::Approx(0.3));
    CHECK_THROWS_AS(temperature(model, x, 1), std::out_of_range);

    CHECK_THROWS_AS(damped_system(2.0, 0.0, 2, harmonic_potential(1.0, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(damped_system(-1.0, 0.1, 2, harmonic_potential(1.0, 2)),
                    std::invalid_argument);
}

TEST_CASE("one-dof oscillator shorthand") {
    const ModelSpec model = damped_harmonic_oscillator(0.1);
    CHECK(model.dim() == 3);
    CHECK(model.energy(Vec{0.0, 10.0, 0.0}) == doctest::Approx(50.0));
    CHECK(model.energy(Vec{1.0, 0.0, 10.0}) == doctest::Approx(0.5 + 1.0));
    CHECK(model.params.at("gamma") == doctest::Approx(0.1));
}

TEST_CASE("metric system contracts momenta with the inverse metric") {
    const std::vector<double> g_inv{2.0, 1.0, 1.0, 3.0};
    const ModelSpec model = quadratic_metric_system(g_inv, 2, zero_potential(3));
    // H = (2 p1^2 + 2 p1 p2 + 3 p2^2)/2 at p = (1,2): (2 + 4 + 12)/2 = 9.
    const Vec x{0.0, 0.0, 1.0, 2.0, 0.0};
    CHECK(model.energy(x) == doctest::Approx(9.0));
    const Covector g = model.energy.gradient(x);
    CHECK(g[2] == doctest::Approx(4.0));  // (g_inv p)_1
    CHECK(g[3] == doctest::Approx(7.0));  // (g_inv p)_2
    check_gradient(model, x, 1e-7);

    // Entropy production indicator is the metric square of p.
    CHECK(entropy_production_indicator(model, x) == doctest::Approx(18.0));

    // An indefinite metric is allowed and shows up as negative production.
    const ModelSpec lorentz =
        quadratic_metric_system({1.0, 0.0, 0.0, -1.0}, 2, zero_potential(3));
    const Vec y{0.0, 0.0, 0.0, 1.0, 0.0};
    CHECK(entropy_production_indicator(lorentz, y) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(quadratic_metric_system({1.0, 0.5, 0.4, 1.0}, 2, zero_potential(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(quadratic_metric_system({1.0, 2.0, 3.0}, 2, zero_potential(3)),
                    dimension_error);
}

TEST_CASE("heat-exchange pair holds c_a exp(S_a/c_a) + c_b exp(S_b/c_b)") {
    const ModelSpec model = thermo_particles(1.0, 1.0, 1.0);
    CHECK(model.dim() == 2);
    CHECK(model.composed());
    CHECK(model.conductivity == doctest::Approx(1.0));

    const Vec x{std::log(273.15), std::log(300.0)};
    CHECK(model.energy(x) == doctest::Approx(573.15).epsilon(1e-14));

    const std::vector<double> T = temperatures(model, x);
    REQUIRE(T.size() == 2);
    CHECK(T[0] == doctest::Approx(273.15).epsilon(1e-14));
    CHECK(T[1] == doctest::Approx(300.0).epsilon(1e-14));
    check_gradient(model, x, 1e-6);

    // Uneven capacities: T_a = exp(S_a/c_a) survives the capacity weighting.
    const ModelSpec uneven = thermo_particles(2.0, 3.0, 0.5);
    const double S_a = entropy_for_temperature(2.0, 250.0);
    const double S_b = entropy_for_temperature(3.0, 310.0);
    CHECK(temperature(uneven, Vec{S_a, S_b}, 0) == doctest::Approx(250.0).epsilon(1e-12));
    CHECK(temperature(uneven, Vec{S_a, S_b}, 1) == doctest::Approx(310.0).epsilon(1e-12));
    CHECK(uneven.energy(Vec{S_a, S_b}) ==
          doctest::Approx(2.0 * 250.0 + 3.0 * 310.0).epsilon(1e-12));
}

TEST_CASE("fourier factor and its positivity floor") {
    const ModelSpec model = thermo_particles(1.0, 1.0, 1.0);
    const Vec x{std::log(273.15), std::log(300.0)};
    const double expect = 1.0 * (1.0 / 273.15 - 1.0 / 300.0);
    CHECK(fourier_factor(model, x) == doctest::Approx(expect).epsilon(1e-14));

    // Equal temperatures: no conduction.
    CHECK(fourier_factor(model, Vec{1.0, 1.0}) == doctest::Approx(0.0));

    // exp(-30) is below the 1e-12 floor; conduction is undefined there.
    CHECK_THROWS_AS(fourier_factor(model, Vec{-30.0, 1.0}), temperature_error);

    const ModelSpec simple = damped_harmonic_oscillator(0.1);
    CHECK_THROWS_AS(fourier_factor(simple, Vec{0.0, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("thermo springs couple mechanics to the heat reservoirs") {
    const ModelSpec model =
        thermo_springs(1.0, 2.0, 1.0, 1.0, 0.5, 1, 1, harmonic_potential(2.0, 2));
    CHECK(model.dim() == 6);
    CHECK(model.composed());

    // (q1,p1,S1,q2,p2,S2) = (1,2,0,-1,4,ln 9):
    // p_a^2/2 + p_b^2/4 + (q_a^2 + q_b^2) + e^0 + e^{ln 9} = 2 + 4 + 2 + 10.
    const Vec x{1.0, 2.0, 0.0, -1.0, 4.0, std::log(9.0)};
    CHECK(model.energy(x) == doctest::Approx(18.0).epsilon(1e-14));
    check_gradient(model, x, 1e-6);

    const std::vector<double> T = temperatures(model, x);
    CHECK(T[0] == doctest::Approx(1.0));
    CHECK(T[1] == doctest::Approx(9.0).epsilon(1e-12));

    // With zero momenta and flat potential it is the resting pair.
    const ModelSpec frozen = thermo_springs(1.0, 2.0, 1.0, 1.0, 0.5, 1, 1, zero_potential(2));
    const ModelSpec pair = thermo_particles(1.0, 1.0, 0.5);
    const Vec rest{0.0, 0.0, 0.4, 0.0, 0.0, 0.7};
    CHECK(frozen.energy(rest) == doctest::Approx(pair.energy(Vec{0.4, 0.7})).epsilon(1e-15));
}

TEST_CASE("quadratic composed model has affine temperatures") {
    const ModelSpec model = quadratic_composed_system(1.0, 2.0, 0.5, 0.25, 0.3);
    CHECK(model.dim() == 6);

    const Vec x{1.0, 1.0, 0.5, 0.0, 2.0, -0.25};
    // Block a: 1/2 + 1/2 + 1*0.5 + 0.25/1 = 1.75; block b: 2 - 0.5 + 0.125.
    CHECK(model.energy(x) == doctest::Approx(1.75 + 1.625).epsilon(1e-14));
    check_gradient(model, x, 1e-7);

    CHECK(temperature(model, x, 0) == doctest::Approx(1.0 + 0.5 / 0.5));
    CHECK(temperature(model, x, 1) == doctest::Approx(2.0 - 0.25 / 0.25));
}

TEST_CASE("structure matrix of a simple model carries the contact bivector") {
    const ModelSpec model = damped_harmonic_oscillator(0.1);
    const Vec x{3.0, 7.0, 0.0};
    const StructureMatrix A = structure_matrix(model, x);
    REQUIRE(A.dim() == 3);

    CHECK(A(0, 1) == doctest::Approx(1.0));
    CHECK(A(1, 0) == doctest::Approx(-1.0));
    CHECK(A(1, 2) == doctest::Approx(-7.0));
    CHECK(A(2, 1) == doctest::Approx(7.0));
    CHECK(A(0, 0) == 0.0);
    CHECK(A(0, 2) == 0.0);
    CHECK(A(2, 2) == 0.0);

    // A dH reproduces the evolution field: (p, -q - p gamma, p^2).
    const Tangent v = A.apply(model.energy.gradient(x));
    CHECK(v[0] == doctest::Approx(7.0));
    CHECK(v[1] == doctest::Approx(-3.0 - 0.7));
    CHECK(v[2] == doctest::Approx(49.0));
}

TEST_CASE("structure matrix of composed models couples the entropy slots") {
    const ModelSpec pair = thermo_particles(1.0, 1.0, 1.0);
    const Vec x{std::log(273.15), std::log(300.0)};
    const double K = fourier_factor(pair, x);
    const StructureMatrix A2 = structure_matrix(pair, x);
    REQUIRE(A2.dim() == 2);
    CHECK(A2(0, 1) == doctest::Approx(K).epsilon(1e-15));
    CHECK(A2(1, 0) == doctest::Approx(-K).epsilon(1e-15));

    // Entropy rates: Sdot_a = K T_b, Sdot_b = -K T_a; total rate K (T_b - T_a) > 0.
    const Tangent rate = A2.apply(pair.energy.gradient(x));
    CHECK(rate[0] == doctest::Approx(K * 300.0).epsilon(1e-13));
    CHECK(rate[1] == doctest::Approx(-K * 273.15).epsilon(1e-13));
    CHECK(rate[0] + rate[1] > 0.0);

    const ModelSpec springs =
        thermo_springs(1.0, 2.0, 1.0, 1.0, 0.5, 1, 1, harmonic_potential(2.0, 2));
    const Vec y{1.0, 2.0, 0.3, -1.0, 4.0, 0.6};
    const StructureMatrix A6 = structure_matrix(springs, y);
    REQUIRE(A6.dim() == 6);
    CHECK(A6(0, 1) == doctest::Approx(1.0));   // q1-p1 pair
    CHECK(A6(3, 4) == doctest::Approx(1.0));   // q2-p2 pair
    CHECK(A6(2, 5) == doctest::Approx(fourier_factor(springs, y)).epsilon(1e-15));
    CHECK(A6(0, 3) == 0.0);
    CHECK(A6(1, 4) == 0.0);

    // Exact skew-symmetry by construction.
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) CHECK(A6(i, j) == -A6(j, i));
}

TEST_CASE("entropy production indicator is the momentum-weighted p gradient") {
    const ModelSpec model = damped_harmonic_oscillator(0.1);
    CHECK(entropy_production_indicator(model, Vec{0.0, 10.0, 0.0}) == doctest::Approx(100.0));
    CHECK(entropy_production_indicator(model, Vec{5.0, 0.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("entropy for temperature inverts the heat-capacity relation") {
    CHECK(entropy_for_temperature(2.0, std::exp(1.0)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(entropy_for_temperature(1.0, 1.0) == doctest::Approx(0.0));
    const double S = entropy_for_temperature(3.0, 250.0);
    CHECK(3.0 * std::exp(S / 3.0) == doctest::Approx(3.0 * 250.0).epsilon(1e-13));
}

TEST_CASE("lagrangian form mirrors the damped mechanical model") {
    const ModelSpec model = damped_system(2.0, 0.5, 1, harmonic_potential(3.0, 1));
    const ContactLagrangian L = lagrangian_of(model);
    CHECK(L.mass == doctest::Approx(2.0));
    CHECK(L.gamma == doctest::Approx(0.5));
    CHECK(L.n == 1);

    // L = m|qdot|^2/2 - V(q) - gamma S at q=2, qdot=3, S=1: 9 - 6 - 0.5.
    CHECK(L.value(Vec{2.0}, Vec{3.0}, 1.0) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(L.d_qdot(Vec{2.0}, Vec{3.0}, 1.0)[0] == doctest::Approx(6.0));
    CHECK(L.d_q(Vec{2.0}, Vec{3.0}, 1.0)[0] == doctest::Approx(-6.0));
    CHECK(L.d_S() == doctest::Approx(-0.5));

    // Heat models have no mechanical Lagrangian side.
    CHECK_THROWS_AS(lagrangian_of(thermo_particles(1.0, 1.0, 1.0)), std::invalid_argument);
}
