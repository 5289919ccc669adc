#include "contactdg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace contactdg {

namespace {

double first_law_residual_step(const ModelSpec& model, const Vec& xa, const Vec& xb) {
    const StateLayout& lay = model.layout;
    if (lay.subsystems() == 1) {
        const int n = lay.n_mech[0];
        double r = xb[lay.s_index(0)] - xa[lay.s_index(0)];
        for (int i = 0; i < n; ++i) {
            const double p_mid = 0.5 * (xa[lay.p_index(0, i)] + xb[lay.p_index(0, i)]);
            r -= p_mid * (xb[lay.q_index(0, i)] - xa[lay.q_index(0, i)]);
        }
        return r;
    }
    Vec mid = midpoint(xa, xb);
    Vec g = model.energy.gradient(mid);
    double r = model.energy(xb) - model.energy(xa);
    for (int a = 0; a < lay.subsystems(); ++a) {
        r -= g[lay.s_index(a)] * (xb[lay.s_index(a)] - xa[lay.s_index(a)]);
        for (int i = 0; i < lay.n_mech[a]; ++i) {
            r -= g[lay.q_index(a, i)] * (xb[lay.q_index(a, i)] - xa[lay.q_index(a, i)]);
            r -= g[lay.p_index(a, i)] * (xb[lay.p_index(a, i)] - xa[lay.p_index(a, i)]);
        }
    }
    return r;
}

}  // namespace

LawReport audit_laws(const Trajectory& traj, const ModelSpec& model, double tol_energy,
                     double tol_entropy) {
    if (traj.states.empty()) throw std::invalid_argument("cannot audit an empty trajectory");
    LawReport rep;
    rep.tol_energy = tol_energy;
    rep.tol_entropy = tol_entropy;
    rep.energy_reference = traj.energy.front();
    rep.temperature_series = traj.temperatures;

    for (double Hk : traj.energy)
        rep.max_energy_drift = std::max(rep.max_energy_drift, std::abs(Hk - rep.energy_reference));

    const int N = traj.size();
    rep.min_entropy_increment = 0.0;
    for (int k = 0; k + 1 < N; ++k) {
        const double ds = traj.total_entropy[k + 1] - traj.total_entropy[k];
        if (k == 0 || ds < rep.min_entropy_increment) rep.min_entropy_increment = ds;
        const double r = first_law_residual_step(model, traj.states[k], traj.states[k + 1]);
        rep.first_law_residual.push_back(r);
        rep.max_first_law_residual = std::max(rep.max_first_law_residual, std::abs(r));
    }

    rep.first_law_pass = rep.max_energy_drift <= tol_energy;
    rep.second_law_pass = rep.min_entropy_increment >= -tol_entropy;
    return rep;
}

double herglotz_residual(const ContactLagrangian& L, const Trajectory& traj, double h) {
    const int N = traj.size();
    if (N < 3) throw std::invalid_argument("residual check needs at least 3 trajectory points");
    if (traj.layout.subsystems() != 1)
        throw std::invalid_argument("residual check applies to one-component trajectories");
    const int n = L.n;
    const StateLayout& lay = traj.layout;

    auto q_at = [&](int k, int i) { return traj.states[k][lay.q_index(0, i)]; };
    auto s_at = [&](int k) { return traj.states[k][lay.s_index(0)]; };

    double worst = 0.0;
    Vec q(n), qdot(n);
    for (int k = 1; k + 1 < N; ++k) {
        for (int i = 0; i < n; ++i) {
            q[i] = q_at(k, i);
            qdot[i] = (q_at(k + 1, i) - q_at(k - 1, i)) / (2.0 * h);
        }
        Vec pi = L.d_qdot(q, qdot, s_at(k));
        Vec dq = L.d_q(q, qdot, s_at(k));
        double sdot = (s_at(k + 1) - s_at(k - 1)) / (2.0 * h);
        double entropy_res = sdot;
        for (int i = 0; i < n; ++i) {
            // m*qddot by a central second difference stands in for d/dt(dL/dqdot).
            const double accel = (q_at(k + 1, i) - 2.0 * q_at(k, i) + q_at(k - 1, i)) / (h * h);
            const double res = L.mass * accel - dq[i] - pi[i] * L.d_S();
            worst = std::max(worst, std::abs(res));
            entropy_res -= qdot[i] * pi[i];
        }
        worst = std::max(worst, std::abs(entropy_res));
    }
    return worst;
}

ConvergenceResult convergence_study(const ModelSpec& model, const Method& method, const Vec& x0,
                                    const StepperConfig& base_cfg,
                                    const std::vector<double>& h_list, double t_final,
                                    const std::function<Vec(double)>& oracle) {
    if (h_list.size() < 2)
        throw std::invalid_argument("convergence study needs at least 2 step sizes");

    ConvergenceResult result;
    Vec ref = oracle(t_final);
    double ref_scale = 1.0 + norm_inf(ref);
    for (double h : h_list) {
        if (!(h > 0.0)) throw std::invalid_argument("step sizes must be positive");
        const int n_steps = static_cast<int>(std::llround(t_final / h));
        StepperConfig cfg = base_cfg;
        cfg.h = h;
        Trajectory traj = simulate(model, method, x0, cfg, n_steps);
        if (traj.failure) throw std::runtime_error("step failure during convergence study");
        Vec diff = traj.states.back();
        for (size_t i = 0; i < diff.size(); ++i) diff[i] -= ref[i];
        result.step_sizes.push_back(h);
        result.errors.push_back(norm_inf(diff));
    }

    for (double e : result.errors)
        if (e <= 1e-15 * ref_scale) result.status = ConvergenceStatus::Degenerate;
    if (result.status == ConvergenceStatus::Degenerate) {
        result.order = std::numeric_limits<double>::quiet_NaN();
        return result;
    }

    // Least-squares slope of log(error) against log(h).
    const int m = static_cast<int>(h_list.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        const double lx = std::log(result.step_sizes[i]);
        const double ly = std::log(result.errors[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    result.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return result;
}

EquilibrationMetrics equilibration_metrics(const Trajectory& traj, const ModelSpec& model) {
    if (model.layout.subsystems() != 2)
        throw std::invalid_argument("equilibration metrics need a two-component model");
    if (traj.states.empty()) throw std::invalid_argument("empty trajectory");

    EquilibrationMetrics m;
    m.gap.reserve(traj.size());
    for (const auto& temps : traj.temperatures) m.gap.push_back(std::abs(temps[0] - temps[1]));
    m.final_gap = m.gap.back();

    m.gap_nonincreasing = true;
    for (size_t k = 0; k + 1 < m.gap.size(); ++k)
        if (m.gap[k + 1] > m.gap[k]) m.gap_nonincreasing = false;

    auto it_a = model.params.find("c_a");
    auto it_b = model.params.find("c_b");
    if (it_a == model.params.end() || it_b == model.params.end())
        throw std::invalid_argument("model parameters carry no heat capacities");
    const double c_a = it_a->second, c_b = it_b->second;
    const double t_a0 = traj.temperatures.front()[0];
    const double t_b0 = traj.temperatures.front()[1];
    m.predicted_equilibrium = (c_a * t_a0 + c_b * t_b0) / (c_a + c_b);
    m.final_offset = std::max(std::abs(traj.temperatures.back()[0] - m.predicted_equilibrium),
                              std::abs(traj.temperatures.back()[1] - m.predicted_equilibrium));
    return m;
}

double entropy_exchange_rate(const ModelSpec& model, const Vec& x) {
    if (!model.composed())
        throw std::invalid_argument("entropy exchange rate needs a two-component model");
    const double t1 = temperature(model, x, 0);
    const double t2 = temperature(model, x, 1);
    if (t1 <= kTemperatureFloor || t2 <= kTemperatureFloor)
        throw temperature_error("temperature at or below positivity floor");
    const double d = t2 - t1;
    return model.conductivity * d * d / (t1 * t2);
}

double predicted_entropy_increment(const ModelSpec& model, const Vec& x_a, const Vec& x_b,
                                   double h) {
    return h * entropy_exchange_rate(model, midpoint(x_a, x_b));
}

}  // namespace contactdg
