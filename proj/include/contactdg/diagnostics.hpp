#pragma once

#include <functional>
#include <vector>

#include "contactdg/integrators.hpp"
#include "contactdg/models.hpp"
#include "contactdg/state.hpp"

namespace contactdg {

/**
 * Audit record for the two conservation laws over one trajectory. The energy
 * law is measured as drift against the initial value; the entropy law as the
 * worst per-step increment of total entropy. The first-law residual series
 * measures the discrete energy-balance identity (see audit_laws).
 */
struct LawReport {
    double tol_energy = 0.0;
    double tol_entropy = 0.0;
    double energy_reference = 0.0;  // H at the first state
    double max_energy_drift = 0.0;
    double min_entropy_increment = 0.0;
    std::vector<double> first_law_residual;
    double max_first_law_residual = 0.0;
    std::vector<std::vector<double>> temperature_series;
    bool first_law_pass = false;
    bool second_law_pass = false;
};

/**
 * Computes max_k |H_k - H_0| and min_k (S_{k+1} - S_k), plus the per-step
 * energy-balance residual: for one-component systems
 *   r_k = (S_{k+1} - S_k) - p_mid . (q_{k+1} - q_k),
 * for two-component systems
 *   r_k = (H_{k+1} - H_k) - sum_a T_a,mid (S_a,k+1 - S_a,k)
 *         - grad H(mid)|_{q,p} . (mechanical increments).
 * All midpoint quantities use the arithmetic mean of consecutive states.
 */
LawReport audit_laws(const Trajectory& traj, const ModelSpec& model, double tol_energy,
                     double tol_entropy);

/**
 * Max norm, over interior trajectory points, of the finite-difference
 * residuals of the continuous dissipative Euler-Lagrange equation
 *   d/dt (dL/dqdot) - dL/dq - (dL/dqdot)(dL/dS) = 0
 * and the entropy law Sdot = qdot . dL/dqdot, using central differences.
 * Needs at least 3 trajectory points.
 */
double herglotz_residual(const ContactLagrangian& L, const Trajectory& traj, double h);

enum class ConvergenceStatus { Ok, Degenerate };

struct ConvergenceResult {
    double order = 0.0;  // least-squares slope of log(error) vs log(h)
    ConvergenceStatus status = ConvergenceStatus::Ok;
    std::vector<double> step_sizes;
    std::vector<double> errors;
};

/**
 * Global error at t_final against an exact-state oracle, measured for each
 * step size; the order is the least-squares slope. Near-zero errors make the
 * slope meaningless and are reported as Degenerate rather than a number.
 */
ConvergenceResult convergence_study(const ModelSpec& model, const Method& method, const Vec& x0,
                                    const StepperConfig& base_cfg,
                                    const std::vector<double>& h_list, double t_final,
                                    const std::function<Vec(double)>& oracle);

struct EquilibrationMetrics {
    std::vector<double> gap;             // |T_1 - T_2| per row
    double predicted_equilibrium = 0.0;  // capacity-weighted mean of initial temperatures
    double final_gap = 0.0;
    double final_offset = 0.0;  // max_a |T_a(final) - predicted_equilibrium|
    bool gap_nonincreasing = false;
};

/// Requires a two-component model whose parameters carry heat capacities
/// c_a, c_b (the prediction comes from conservation of c_a T_a + c_b T_b).
EquilibrationMetrics equilibration_metrics(const Trajectory& traj, const ModelSpec& model);

/// Continuous total-entropy production rate k (T_2 - T_1)^2 / (T_1 T_2) of a
/// two-component heat-conducting model at state x.
double entropy_exchange_rate(const ModelSpec& model, const Vec& x);

/// h times the exchange rate at the arithmetic midpoint of (x_a, x_b); for
/// quadratic-energy two-component models this equals the midpoint scheme's
/// total entropy increment exactly.
double predicted_entropy_increment(const ModelSpec& model, const Vec& x_a, const Vec& x_b,
                                   double h);

}  // namespace contactdg
