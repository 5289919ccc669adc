#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contactdg/disc_grad.hpp"
#include "contactdg/models.hpp"
#include "contactdg/state.hpp"

namespace contactdg {

enum class SolverKind { FixedPoint, Newton };

struct StepperConfig {
    double h = 0.1;
    SolverKind solver = SolverKind::FixedPoint;
    double tol_solve = 1e-12;
    int max_iter = 50;
    DiscreteGradientOptions dg_options;

    void validate() const;  // h > 0, tol_solve > 0, max_iter >= 1
};

/// Implicit solve did not reach tol_solve within max_iter.
struct step_failure : std::runtime_error {
    step_failure(double res, const std::string& msg) : std::runtime_error(msg), residual(res) {}
    double residual;
};

/// Record kept when a trajectory aborts early.
struct StepFailure {
    int step = -1;       // index of the step that failed (state k -> k+1)
    double residual = 0.0;
    std::string message;
};

/**
 * Uniform-grid trajectory with eagerly computed diagnostics. On step failure
 * the trajectory holds the states completed so far plus the failure record.
 */
struct Trajectory {
    StateLayout layout;
    double h = 0.0;
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<double> energy;
    std::vector<double> total_entropy;
    std::vector<std::vector<double>> temperatures;  // [row][subsystem]
    std::vector<int> solver_iterations;             // one entry per completed step
    std::optional<StepFailure> failure;

    int size() const { return static_cast<int>(states.size()); }
    bool complete(int n_steps) const { return !failure && size() == n_steps + 1; }
};

/**
 * One step of the energy-preserving implicit scheme
 *   (x' - x)/h = A((x + x')/2) * dbar_H(x, x')
 * where A is the model's skew structure matrix and dbar_H a discrete
 * gradient. Skew-symmetry makes H(x') = H(x) up to the solve residual.
 */
Vec dg_step(const ModelSpec& model, DiscreteGradientKind kind, const Vec& x,
            const StepperConfig& cfg, int* iterations = nullptr);

/// Explicit rational update for H = p^2/2 + q^2/2 + gamma*S with the
/// midpoint discrete gradient; reference for the generic implicit solver.
Vec dg_step_closed_form_dho(double gamma, double h, const Vec& x);

/// Classical RK4 on xdot = A(x) grad H(x); no conservation guarantees.
Vec rk4_step(const ModelSpec& model, const Vec& x, double h);

/**
 * Discrete Lagrangian (q0, q1, S0) -> R with analytic partial derivatives:
 * d1 and d2 differentiate in the first and second position slot, dS in the
 * entropy slot.
 */
struct DiscreteLagrangian {
    int n = 1;
    std::function<double(const Vec&, const Vec&, double)> value;
    std::function<Vec(const Vec&, const Vec&, double)> d1;
    std::function<Vec(const Vec&, const Vec&, double)> d2;
    std::function<double(const Vec&, const Vec&, double)> dS;
};

/// L_d = |q1-q0|^2/(2h) - h((q0+q1)/2)^2/2 - h*gamma*S0, the quadrature
/// discretization of the damped harmonic oscillator Lagrangian.
DiscreteLagrangian dho_discrete_lagrangian(double gamma, double h);

/// Midpoint-quadrature discretization L_d = h*L((q0+q1)/2, (q1-q0)/h, S0).
DiscreteLagrangian midpoint_discrete_lagrangian(const ContactLagrangian& L, double h);

struct HerglotzStepResult {
    Vec q_next;
    double s_cur = 0.0;
};

/**
 * One step of the two-step variational scheme: the entropy update
 *   S_cur = S_prev + (q_cur - q_prev) . d2 L_d(q_prev, q_cur, S_prev)
 * is explicit; q_next then solves
 *   d1 L_d(q_cur, q_next, S_cur)
 *     + (1 + dS L_d(q_cur, q_next, S_cur)) * d2 L_d(q_prev, q_cur, S_prev) = 0
 * by Newton iteration seeded at 2 q_cur - q_prev.
 */
HerglotzStepResult herglotz_step(const DiscreteLagrangian& Ld, const Vec& q_prev,
                                 const Vec& q_cur, double s_prev,
                                 double tol = 1e-12, int max_iter = 50);

/// Closed-form instance of herglotz_step for dho_discrete_lagrangian.
HerglotzStepResult herglotz_step_closed_form_dho(double gamma, double h, double q_prev,
                                                 double q_cur, double s_prev);

enum class MethodFamily { DiscreteGradient, Herglotz, RungeKutta4, ClosedFormDHO };

struct Method {
    MethodFamily family = MethodFamily::DiscreteGradient;
    DiscreteGradientKind dg_kind = DiscreteGradientKind::Midpoint;
};

/// Accepts "dg:gonzalez", "dg:avf", "dg:itoh-abe", "herglotz", "rk4",
/// "dho-closed-form". Throws std::invalid_argument otherwise.
Method method_from_name(const std::string& name);
std::string method_name(const Method& m);

/**
 * Integrate n_steps steps from x0. The variational method needs a second
 * position to start; states along it are recorded as phase-space points
 * (q_k, m v_k, S_k) with the forward-difference velocity v_k. Step failures
 * abort cleanly: the partial trajectory is returned with failure set.
 */
Trajectory simulate(const ModelSpec& model, const Method& method, const Vec& x0,
                    const StepperConfig& cfg, int n_steps,
                    const std::optional<Vec>& herglotz_q1 = std::nullopt);

/**
 * Exact underdamped oscillator state at time t for H = p^2/2 + q^2/2 +
 * gamma*S: q, p from the standard closed form, S by inverting energy
 * conservation. Requires 0 < gamma < 2.
 */
Vec exact_dho(double gamma, const Vec& x0, double t);

/// Solve the square system M y = b in place by partial-pivot elimination.
Vec solve_linear(std::vector<double> M_rowmajor, Vec b);

}  // namespace contactdg
