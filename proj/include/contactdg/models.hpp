#pragma once

#include <functional>
#include <map>
#include <string>

#include "contactdg/scalar_field.hpp"
#include "contactdg/state.hpp"
#include "contactdg/structure_matrix.hpp"

namespace contactdg {

/// Value + gradient pair; no automatic differentiation anywhere.
struct Potential {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;
};

Potential harmonic_potential(double k_spring, int n = 1);
Potential zero_potential(int n);

/**
 * A concrete thermodynamic model: energy function, analytic gradient, state
 * layout, and (for two-component systems) the thermal conductivity of the
 * wall joining the subsystems. Immutable after construction.
 */
struct ModelSpec {
    std::string name;
    StateLayout layout;
    ScalarField energy;
    double conductivity = 0.0;  // composed systems only
    std::map<std::string, double> params;

    int dim() const { return layout.dim(); }
    bool composed() const { return layout.subsystems() == 2; }
};

/**
 * Mechanical particle in a thermal bath with viscous friction:
 * H = |p|^2/(2m) + V(q) + gamma*S, temperature gamma. The model only makes
 * sense for gamma > 0 (zero bath temperature is rejected).
 */
ModelSpec damped_system(double mass, double gamma, int n, const Potential& V);

/// One-dof damped harmonic oscillator, V = q^2/2.
ModelSpec damped_harmonic_oscillator(double gamma);

/**
 * H = 1/2 g^{ij} p_i p_j + V(q, S) with a symmetric (not necessarily
 * definite) inverse-metric tensor; V takes the concatenated (q, S) vector.
 * Indefinite g is allowed; entropy monotonicity then fails and shows up in
 * the Delta_Q indicator.
 */
ModelSpec quadratic_metric_system(const std::vector<double>& g_inv_rowmajor, int n,
                                  const Potential& V_qS);

/**
 * Two particles at rest exchanging heat through a conducting wall:
 * H = c_a e^{S_a/c_a} + c_b e^{S_b/c_b}, state (S_a, S_b).
 */
ModelSpec thermo_particles(double c_a, double c_b, double k);

/**
 * Two moving particles with a potential coupling and internal heat storage:
 * H = p_a^2/(2 m_a) + p_b^2/(2 m_b) + V(q_a, q_b) + c_a e^{S_a/c_a}
 *   + c_b e^{S_b/c_b}. V takes the concatenated (q_a, q_b) vector. With
 * V = 0 and p = 0 this reduces to the free thermo-particle pair.
 */
ModelSpec thermo_springs(double m_a, double m_b, double c_a, double c_b, double k, int n_a,
                         int n_b, const Potential& V);

/**
 * Two-component quadratic test model used to exercise the per-step entropy
 * identity: H = sum_a [ p_a^2/2 + q_a^2/2 + T_ref_a S_a + S_a^2/(2 c_a) ],
 * so temperatures are affine in the entropies.
 */
ModelSpec quadratic_composed_system(double t_ref_a, double t_ref_b, double c_a, double c_b,
                                    double k);

/// T_alpha = dH/dS_alpha at x (alpha is a 0-based subsystem index).
double temperature(const ModelSpec& model, const Vec& x, int alpha);

/// All subsystem temperatures at x.
std::vector<double> temperatures(const ModelSpec& model, const Vec& x);

/// Initial entropy realizing a target temperature for a heat-capacity
/// subsystem: S = c ln T.
double entropy_for_temperature(double heat_capacity, double T);

/// Fourier factor K = k (1/T_1 - 1/T_2). Throws temperature_error when a
/// temperature falls below the positivity floor (1e-12); the model is
/// undefined there and clamping would fake physics.
double fourier_factor(const ModelSpec& model, const Vec& x);

/**
 * Structure matrix at x: the contact bivector matrix for simple models, the
 * almost-Poisson block matrix (canonical symplectic blocks per subsystem
 * plus the +-K entries coupling the entropies) for composed ones.
 */
StructureMatrix structure_matrix(const ModelSpec& model, const Vec& x);

/// Delta_Q(H) = p_i dH/dp_i at x; nonnegative iff the simple model obeys
/// the second law along its evolution flow.
double entropy_production_indicator(const ModelSpec& model, const Vec& x);

/**
 * Mechanical contact Lagrangian L = m|qdot|^2/2 - V(q) - gamma S, the
 * Lagrangian side of damped_system under the Legendre map p = m qdot.
 */
struct ContactLagrangian {
    double mass = 1.0;
    double gamma = 0.0;
    int n = 1;
    Potential V;

    double value(const Vec& q, const Vec& qdot, double S) const;
    Vec d_qdot(const Vec& q, const Vec& qdot, double S) const;  // dL/dqdot
    Vec d_q(const Vec& q, const Vec& qdot, double S) const;     // dL/dq
    double d_S() const { return -gamma; }
};

ContactLagrangian lagrangian_of(const ModelSpec& damped_model);

constexpr double kTemperatureFloor = 1e-12;

}  // namespace contactdg
