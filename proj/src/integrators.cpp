#include "contactdg/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace contactdg {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Vec add_scaled(const Vec& a, double c, const Vec& b) {
    Vec out(a);
    for (size_t i = 0; i < out.size(); ++i) out[i] += c * b[i];
    return out;
}

double sum_entropy(const StateLayout& lay, const Vec& x) {
    double s = 0.0;
    for (int a = 0; a < lay.subsystems(); ++a) s += x[lay.s_index(a)];
    return s;
}

/// Forward-difference Jacobian of F at y, reusing F(y).
std::vector<double> fd_jacobian(const std::function<Vec(const Vec&)>& F, const Vec& y,
                                const Vec& Fy) {
    const int d = static_cast<int>(y.size());
    std::vector<double> J(static_cast<size_t>(d) * d, 0.0);
    Vec yp = y;
    for (int j = 0; j < d; ++j) {
        const double eps = 1.4901161193847656e-8 * (1.0 + std::abs(y[j]));
        yp[j] = y[j] + eps;
        Vec Fp = F(yp);
        yp[j] = y[j];
        for (int i = 0; i < d; ++i) J[static_cast<size_t>(i) * d + j] = (Fp[i] - Fy[i]) / eps;
    }
    return J;
}

/// Damped Newton update on the residual map; halves the step until the
/// residual norm drops (or the damping floor is hit).
Vec newton_update(const std::function<Vec(const Vec&)>& F, const Vec& y, const Vec& Fy,
                  double res) {
    auto J = fd_jacobian(F, y, Fy);
    Vec delta = solve_linear(std::move(J), Fy);
    double lambda = 1.0;
    Vec best = add_scaled(y, -lambda, delta);
    double best_res = norm_inf(F(best));
    while (best_res >= res && lambda > 1.0 / 64.0) {
        lambda *= 0.5;
        Vec cand = add_scaled(y, -lambda, delta);
        double r = norm_inf(F(cand));
        if (r < best_res) {
            best = std::move(cand);
            best_res = r;
        }
    }
    return best;
}

/**
 * Drive F(y) = 0 with fixed-point sweeps y <- y - F(y), escalating to damped
 * Newton after ten non-contracting sweeps (or immediately when configured).
 * After the tolerance is met a few extra sweeps push the residual toward the
 * round-off floor; per-step conservation errors scale with the final
 * residual, so the polish keeps long-run drift orders below the tolerance.
 */
Vec solve_residual_map(const std::function<Vec(const Vec&)>& F, Vec y, const StepperConfig& cfg,
                       int* iterations) {
    SolverKind mode = cfg.solver;
    Vec Fy = F(y);
    double res = norm_inf(Fy);
    Vec best_y = y;
    double best_res = res;
    double prev_res = res;
    int non_contracting = 0;
    int used = 0;

    for (int it = 0; it < cfg.max_iter; ++it) {
        if (res <= cfg.tol_solve) {
            for (int polish = 0; polish < 3 && res > 0.0; ++polish) {
                Vec cand = (mode == SolverKind::FixedPoint)
                               ? add_scaled(y, -1.0, Fy)
                               : newton_update(F, y, Fy, res);
                Vec Fc = F(cand);
                double rc = norm_inf(Fc);
                ++used;
                if (rc >= best_res) break;
                best_y = cand;
                best_res = rc;
                bool halved = rc < 0.5 * res;
                y = std::move(cand);
                Fy = std::move(Fc);
                res = rc;
                if (!halved) break;
            }
            if (iterations) *iterations = used;
            return best_y;
        }

        y = (mode == SolverKind::FixedPoint) ? add_scaled(y, -1.0, Fy)
                                             : newton_update(F, y, Fy, res);
        Fy = F(y);
        res = norm_inf(Fy);
        ++used;
        if (res < best_res) {
            best_y = y;
            best_res = res;
        }
        if (mode == SolverKind::FixedPoint && res >= prev_res && ++non_contracting >= 10)
            mode = SolverKind::Newton;
        prev_res = res;
    }
    throw step_failure(best_res, "implicit step solver did not reach tolerance " +
                                     std::to_string(cfg.tol_solve) + " in " +
                                     std::to_string(cfg.max_iter) + " iterations");
}

}  // namespace

void StepperConfig::validate() const {
    if (!(h > 0.0)) throw std::invalid_argument("time step must be positive");
    if (!(tol_solve > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("solver iteration cap must be at least 1");
}

Vec solve_linear(std::vector<double> M, Vec b) {
    const int d = static_cast<int>(b.size());
    if (static_cast<int>(M.size()) != d * d)
        throw dimension_error("matrix/vector size mismatch in linear solve");
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::abs(M[static_cast<size_t>(r) * d + col]) >
                std::abs(M[static_cast<size_t>(piv) * d + col]))
                piv = r;
        if (M[static_cast<size_t>(piv) * d + col] == 0.0)
            throw std::runtime_error("singular matrix in linear solve");
        if (piv != col) {
            for (int c = 0; c < d; ++c)
                std::swap(M[static_cast<size_t>(piv) * d + c], M[static_cast<size_t>(col) * d + c]);
            std::swap(b[piv], b[col]);
        }
        const double diag = M[static_cast<size_t>(col) * d + col];
        for (int r = col + 1; r < d; ++r) {
            const double f = M[static_cast<size_t>(r) * d + col] / diag;
            if (f == 0.0) continue;
            for (int c = col; c < d; ++c)
                M[static_cast<size_t>(r) * d + c] -= f * M[static_cast<size_t>(col) * d + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = d - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < d; ++c) acc -= M[static_cast<size_t>(r) * d + c] * b[c];
        b[r] = acc / M[static_cast<size_t>(r) * d + r];
    }
    return b;
}

Vec dg_step(const ModelSpec& model, DiscreteGradientKind kind, const Vec& x,
            const StepperConfig& cfg, int* iterations) {
    cfg.validate();
    require_dim(x, model.dim(), "state");
    const double h = cfg.h;
    auto F = [&](const Vec& y) {
        Vec mid = midpoint(x, y);
        StructureMatrix A = structure_matrix(model, mid);
        Covector gbar = discrete_gradient(kind, model.energy, x, y, cfg.dg_options);
        Vec Ag = A.apply(gbar);
        Vec r(y.size());
        for (size_t i = 0; i < r.size(); ++i) r[i] = y[i] - x[i] - h * Ag[i];
        return r;
    };
    Vec predictor = add_scaled(x, h, structure_matrix(model, x).apply(model.energy.gradient(x)));
    return solve_residual_map(F, std::move(predictor), cfg, iterations);
}

Vec dg_step_closed_form_dho(double gamma, double h, const Vec& x) {
    require_dim(x, 3, "state");
    const double q = x[0], p = x[1], S = x[2];
    const double D = 2.0 * gamma * h + h * h + 4.0;
    Vec out(3);
    out[0] = (2.0 * gamma * h * q - h * h * q + 4.0 * h * p + 4.0 * q) / D;
    out[1] = -(2.0 * gamma * h * p + h * h * p + 4.0 * h * q - 4.0 * p) / D;
    out[2] = (S * h * h * h * h + (4.0 * S * gamma + 4.0 * q * q) * h * h * h +
              (4.0 * S * gamma * gamma - 16.0 * p * q + 8.0 * S) * h * h +
              (16.0 * S * gamma + 16.0 * p * p) * h + 16.0 * S) /
             (D * D);
    return out;
}

Vec rk4_step(const ModelSpec& model, const Vec& x, double h) {
    require_dim(x, model.dim(), "state");
    auto f = [&](const Vec& y) {
        return structure_matrix(model, y).apply(model.energy.gradient(y));
    };
    Vec k1 = f(x);
    Vec k2 = f(add_scaled(x, 0.5 * h, k1));
    Vec k3 = f(add_scaled(x, 0.5 * h, k2));
    Vec k4 = f(add_scaled(x, h, k3));
    Vec out(x);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

DiscreteLagrangian dho_discrete_lagrangian(double gamma, double h) {
    DiscreteLagrangian Ld;
    Ld.n = 1;
    Ld.value = [gamma, h](const Vec& q0, const Vec& q1, double S0) {
        const double d = q1[0] - q0[0], s = q0[0] + q1[0];
        return d * d / (2.0 * h) - h * s * s / 8.0 - h * gamma * S0;
    };
    Ld.d1 = [h](const Vec& q0, const Vec& q1, double) {
        return Vec{-(q1[0] - q0[0]) / h - h * (q0[0] + q1[0]) / 4.0};
    };
    Ld.d2 = [h](const Vec& q0, const Vec& q1, double) {
        return Vec{(q1[0] - q0[0]) / h - h * (q0[0] + q1[0]) / 4.0};
    };
    Ld.dS = [gamma, h](const Vec&, const Vec&, double) { return -gamma * h; };
    return Ld;
}

DiscreteLagrangian midpoint_discrete_lagrangian(const ContactLagrangian& L, double h) {
    DiscreteLagrangian Ld;
    Ld.n = L.n;
    Ld.value = [L, h](const Vec& q0, const Vec& q1, double S0) {
        Vec qm = midpoint(q0, q1);
        Vec v(q0.size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = (q1[i] - q0[i]) / h;
        return h * L.value(qm, v, S0);
    };
    // d/dq0 = h * (dL/dq * 1/2 - dL/dqdot * 1/h), and symmetrically for q1.
    Ld.d1 = [L, h](const Vec& q0, const Vec& q1, double S0) {
        Vec qm = midpoint(q0, q1);
        Vec v(q0.size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = (q1[i] - q0[i]) / h;
        Vec dq = L.d_q(qm, v, S0);
        Vec dv = L.d_qdot(qm, v, S0);
        Vec out(q0.size());
        for (size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * h * dq[i] - dv[i];
        return out;
    };
    Ld.d2 = [L, h](const Vec& q0, const Vec& q1, double S0) {
        Vec qm = midpoint(q0, q1);
        Vec v(q0.size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = (q1[i] - q0[i]) / h;
        Vec dq = L.d_q(qm, v, S0);
        Vec dv = L.d_qdot(qm, v, S0);
        Vec out(q0.size());
        for (size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * h * dq[i] + dv[i];
        return out;
    };
    Ld.dS = [L, h](const Vec&, const Vec&, double) { return h * L.d_S(); };
    return Ld;
}

HerglotzStepResult herglotz_step(const DiscreteLagrangian& Ld, const Vec& q_prev,
                                 const Vec& q_cur, double s_prev, double tol, int max_iter) {
    require_dim(q_prev, Ld.n, "previous position");
    require_dim(q_cur, Ld.n, "current position");
    Vec d2_prev = Ld.d2(q_prev, q_cur, s_prev);

    HerglotzStepResult out;
    out.s_cur = s_prev;
    for (int i = 0; i < Ld.n; ++i) out.s_cur += (q_cur[i] - q_prev[i]) * d2_prev[i];

    const double s_cur = out.s_cur;
    auto G = [&](const Vec& z) {
        Vec g = Ld.d1(q_cur, z, s_cur);
        const double w = 1.0 + Ld.dS(q_cur, z, s_cur);
        for (int i = 0; i < Ld.n; ++i) g[i] += w * d2_prev[i];
        return g;
    };

    Vec z(q_cur.size());
    for (size_t i = 0; i < z.size(); ++i) z[i] = 2.0 * q_cur[i] - q_prev[i];
    Vec Gz = G(z);
    double res = norm_inf(Gz);
    for (int it = 0; it < max_iter && res > tol; ++it) {
        z = newton_update(G, z, Gz, res);
        Gz = G(z);
        res = norm_inf(Gz);
    }
    if (res > tol)
        throw step_failure(res, "variational step root-finder did not reach tolerance " +
                                    std::to_string(tol));
    out.q_next = std::move(z);
    return out;
}

HerglotzStepResult herglotz_step_closed_form_dho(double gamma, double h, double q_prev,
                                                 double q_cur, double s_prev) {
    HerglotzStepResult out;
    const double h2 = h * h, h3 = h2 * h;
    out.q_next = Vec{(gamma * h3 * q_prev + gamma * h3 * q_cur + 4.0 * gamma * h * q_prev -
                      4.0 * gamma * h * q_cur - h2 * q_prev - 2.0 * h2 * q_cur - 4.0 * q_prev +
                      8.0 * q_cur) /
                     (h2 + 4.0)};
    const double d = q_cur - q_prev;
    out.s_cur = s_prev + d * d / h - h * (q_cur * q_cur - q_prev * q_prev) / 4.0;
    return out;
}

Method method_from_name(const std::string& name) {
    if (name == "herglotz") return {MethodFamily::Herglotz, DiscreteGradientKind::Midpoint};
    if (name == "rk4") return {MethodFamily::RungeKutta4, DiscreteGradientKind::Midpoint};
    if (name == "dho-closed-form")
        return {MethodFamily::ClosedFormDHO, DiscreteGradientKind::Midpoint};
    if (name.rfind("dg:", 0) == 0)
        return {MethodFamily::DiscreteGradient, discrete_gradient_kind_from_name(name.substr(3))};
    throw std::invalid_argument("unknown method name: " + name);
}

std::string method_name(const Method& m) {
    switch (m.family) {
        case MethodFamily::Herglotz: return "herglotz";
        case MethodFamily::RungeKutta4: return "rk4";
        case MethodFamily::ClosedFormDHO: return "dho-closed-form";
        case MethodFamily::DiscreteGradient: break;
    }
    switch (m.dg_kind) {
        case DiscreteGradientKind::MeanValue: return "dg:avf";
        case DiscreteGradientKind::Midpoint: return "dg:gonzalez";
        case DiscreteGradientKind::CoordinateIncrement: return "dg:itoh-abe";
    }
    return "dg:gonzalez";
}

namespace {

void append_row(Trajectory& traj, const ModelSpec& model, double t, Vec x) {
    traj.times.push_back(t);
    traj.energy.push_back(model.energy(x));
    traj.total_entropy.push_back(sum_entropy(model.layout, x));
    traj.temperatures.push_back(temperatures(model, x));
    traj.states.push_back(std::move(x));
}

Trajectory simulate_herglotz(const ModelSpec& model, const Vec& x0, const StepperConfig& cfg,
                             int n_steps, const std::optional<Vec>& q1_seed) {
    ContactLagrangian L = lagrangian_of(model);
    DiscreteLagrangian Ld = midpoint_discrete_lagrangian(L, cfg.h);
    const int n = L.n;
    const double h = cfg.h;

    Vec q_prev(x0.begin(), x0.begin() + n);
    double s_prev = x0[2 * n];
    Vec q_cur;
    if (q1_seed) {
        require_dim(*q1_seed, n, "second position seed");
        q_cur = *q1_seed;
    } else {
        // Consistent one-step seed from the initial momentum.
        q_cur = q_prev;
        for (int i = 0; i < n; ++i) q_cur[i] += h * x0[n + i] / L.mass;
    }

    Trajectory traj;
    traj.layout = model.layout;
    traj.h = h;
    auto phase_point = [&](const Vec& qa, const Vec& qb, double s) {
        Vec x(2 * n + 1);
        for (int i = 0; i < n; ++i) {
            x[i] = qa[i];
            x[n + i] = L.mass * (qb[i] - qa[i]) / h;
        }
        x[2 * n] = s;
        return x;
    };
    append_row(traj, model, 0.0, phase_point(q_prev, q_cur, s_prev));

    for (int k = 1; k <= n_steps; ++k) {
        HerglotzStepResult step;
        try {
            step = herglotz_step(Ld, q_prev, q_cur, s_prev, cfg.tol_solve, cfg.max_iter);
        } catch (const step_failure& e) {
            traj.failure = StepFailure{traj.size() - 1, e.residual, e.what()};
            return traj;
        }
        append_row(traj, model, k * h, phase_point(q_cur, step.q_next, step.s_cur));
        traj.solver_iterations.push_back(0);
        q_prev = q_cur;
        q_cur = std::move(step.q_next);
        s_prev = step.s_cur;
    }
    return traj;
}

}  // namespace

Trajectory simulate(const ModelSpec& model, const Method& method, const Vec& x0,
                    const StepperConfig& cfg, int n_steps,
                    const std::optional<Vec>& herglotz_q1) {
    cfg.validate();
    if (n_steps < 0) throw std::invalid_argument("step count must be nonnegative");
    require_dim(x0, model.dim(), "initial state");

    if (method.family == MethodFamily::Herglotz)
        return simulate_herglotz(model, x0, cfg, n_steps, herglotz_q1);

    double gamma_cf = 0.0;
    if (method.family == MethodFamily::ClosedFormDHO) {
        auto it = model.params.find("gamma");
        if (model.dim() != 3 || it == model.params.end())
            throw std::invalid_argument("closed-form update needs the one-dof damped oscillator");
        gamma_cf = it->second;
    }

    Trajectory traj;
    traj.layout = model.layout;
    traj.h = cfg.h;
    append_row(traj, model, 0.0, x0);

    Vec x = x0;
    for (int k = 0; k < n_steps; ++k) {
        Vec next;
        int iters = 0;
        try {
            switch (method.family) {
                case MethodFamily::DiscreteGradient:
                    next = dg_step(model, method.dg_kind, x, cfg, &iters);
                    break;
                case MethodFamily::ClosedFormDHO:
                    next = dg_step_closed_form_dho(gamma_cf, cfg.h, x);
                    break;
                case MethodFamily::RungeKutta4:
                    next = rk4_step(model, x, cfg.h);
                    break;
                case MethodFamily::Herglotz:
                    break;  // handled above
            }
        } catch (const step_failure& e) {
            traj.failure = StepFailure{k, e.residual, e.what()};
            return traj;
        } catch (const temperature_error& e) {
            traj.failure = StepFailure{k, kNan, e.what()};
            return traj;
        }
        append_row(traj, model, (k + 1) * cfg.h, next);
        traj.solver_iterations.push_back(iters);
        x = std::move(next);
    }
    return traj;
}

Vec exact_dho(double gamma, const Vec& x0, double t) {
    require_dim(x0, 3, "state");
    if (!(gamma > 0.0) || gamma >= 2.0)
        throw std::invalid_argument("exact oscillator solution needs 0 < gamma < 2 (underdamped)");
    const double q0 = x0[0], p0 = x0[1], s0 = x0[2];
    const double w = std::sqrt(1.0 - 0.25 * gamma * gamma);
    const double B = (p0 + 0.5 * gamma * q0) / w;
    const double decay = std::exp(-0.5 * gamma * t);
    const double c = std::cos(w * t), s = std::sin(w * t);
    Vec out(3);
    out[0] = decay * (q0 * c + B * s);
    out[1] = decay * (-0.5 * gamma * (q0 * c + B * s) + w * (B * c - q0 * s));
    // Energy conservation along the evolution flow fixes S.
    const double mech0 = 0.5 * (p0 * p0 + q0 * q0);
    const double mech = 0.5 * (out[1] * out[1] + out[0] * out[0]);
    out[2] = s0 + (mech0 - mech) / gamma;
    return out;
}

}  // namespace contactdg
