#include "contactdg/models.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace contactdg {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

Potential harmonic_potential(double k_spring, int n) {
    Potential V;
    V.value = [k_spring, n](const Vec& q) {
        require_dim(q, n, "harmonic potential argument");
        double s = 0.0;
        for (double qi : q) s += qi * qi;
        return 0.5 * k_spring * s;
    };
    V.grad = [k_spring, n](const Vec& q) {
        require_dim(q, n, "harmonic potential argument");
        Vec g(q);
        for (double& gi : g) gi *= k_spring;
        return g;
    };
    return V;
}

Potential zero_potential(int n) {
    Potential V;
    V.value = [n](const Vec& q) {
        require_dim(q, n, "potential argument");
        return 0.0;
    };
    V.grad = [n](const Vec& q) {
        require_dim(q, n, "potential argument");
        return Vec(q.size(), 0.0);
    };
    return V;
}

ModelSpec damped_system(double mass, double gamma, int n, const Potential& V) {
    require_positive(mass, "mass");
    require_positive(gamma, "friction coefficient");
    if (n < 1) throw std::invalid_argument("mechanical dimension must be at least 1");

    ModelSpec m;
    m.name = "damped_system";
    m.layout = simple_layout(n);
    m.params = {{"mass", mass}, {"gamma", gamma}};

    const int dim = m.layout.dim();
    m.energy.value = [mass, gamma, V, n, dim](const Vec& x) {
        require_dim(x, dim, "state");
        Vec q(x.begin(), x.begin() + n);
        double kin = 0.0;
        for (int i = 0; i < n; ++i) kin += x[n + i] * x[n + i];
        return kin / (2.0 * mass) + V.value(q) + gamma * x[2 * n];
    };
    m.energy.grad = [mass, gamma, V, n, dim](const Vec& x) {
        require_dim(x, dim, "state");
        Vec q(x.begin(), x.begin() + n);
        Vec g(dim, 0.0);
        Vec dV = V.grad(q);
        for (int i = 0; i < n; ++i) {
            g[i] = dV[i];
            g[n + i] = x[n + i] / mass;
        }
        g[2 * n] = gamma;
        return g;
    };
    return m;
}

ModelSpec damped_harmonic_oscillator(double gamma) {
    ModelSpec m = damped_system(1.0, gamma, 1, harmonic_potential(1.0, 1));
    m.name = "damped_harmonic_oscillator";
    return m;
}

ModelSpec quadratic_metric_system(const std::vector<double>& g_inv_rowmajor, int n,
                                  const Potential& V_qS) {
    if (n < 1) throw std::invalid_argument("mechanical dimension must be at least 1");
    if (static_cast<int>(g_inv_rowmajor.size()) != n * n)
        throw dimension_error("inverse metric must be n x n row-major");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g_inv_rowmajor[i * n + j] != g_inv_rowmajor[j * n + i])
                throw std::invalid_argument("inverse metric must be symmetric");

    ModelSpec m;
    m.name = "quadratic_metric_system";
    m.layout = simple_layout(n);
    const int dim = m.layout.dim();
    auto g_inv = g_inv_rowmajor;

    m.energy.value = [g_inv, V_qS, n, dim](const Vec& x) {
        require_dim(x, dim, "state");
        double kin = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) kin += g_inv[i * n + j] * x[n + i] * x[n + j];
        Vec qS(x.begin(), x.begin() + n);
        qS.push_back(x[2 * n]);
        return 0.5 * kin + V_qS.value(qS);
    };
    m.energy.grad = [g_inv, V_qS, n, dim](const Vec& x) {
        require_dim(x, dim, "state");
        Vec qS(x.begin(), x.begin() + n);
        qS.push_back(x[2 * n]);
        Vec dV = V_qS.grad(qS);
        Vec g(dim, 0.0);
        for (int i = 0; i < n; ++i) {
            g[i] = dV[i];
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += g_inv[i * n + j] * x[n + j];
            g[n + i] = row;
        }
        g[2 * n] = dV[n];
        return g;
    };
    return m;
}

ModelSpec thermo_particles(double c_a, double c_b, double k) {
    require_positive(c_a, "heat capacity c_a");
    require_positive(c_b, "heat capacity c_b");
    require_positive(k, "wall conductivity");

    ModelSpec m;
    m.name = "thermo_particles";
    m.layout = composed_layout(0, 0);
    m.conductivity = k;
    m.params = {{"c_a", c_a}, {"c_b", c_b}, {"k", k}};

    m.energy.value = [c_a, c_b](const Vec& x) {
        require_dim(x, 2, "state");
        return c_a * std::exp(x[0] / c_a) + c_b * std::exp(x[1] / c_b);
    };
    m.energy.grad = [c_a, c_b](const Vec& x) {
        require_dim(x, 2, "state");
        return Vec{std::exp(x[0] / c_a), std::exp(x[1] / c_b)};
    };
    return m;
}

ModelSpec thermo_springs(double m_a, double m_b, double c_a, double c_b, double k, int n_a,
                         int n_b, const Potential& V) {
    require_positive(m_a, "mass m_a");
    require_positive(m_b, "mass m_b");
    require_positive(c_a, "heat capacity c_a");
    require_positive(c_b, "heat capacity c_b");
    require_positive(k, "wall conductivity");
    if (n_a < 1 || n_b < 1) throw std::invalid_argument("mechanical dimensions must be at least 1");

    ModelSpec m;
    m.name = "thermo_springs";
    m.layout = composed_layout(n_a, n_b);
    m.conductivity = k;
    m.params = {{"m_a", m_a}, {"m_b", m_b}, {"c_a", c_a}, {"c_b", c_b}, {"k", k}};

    const StateLayout lay = m.layout;
    const int dim = lay.dim();
    m.energy.value = [m_a, m_b, c_a, c_b, V, lay, n_a, n_b, dim](const Vec& x) {
        require_dim(x, dim, "state");
        Vec q;
        q.reserve(n_a + n_b);
        for (int i = 0; i < n_a; ++i) q.push_back(x[lay.q_index(0, i)]);
        for (int i = 0; i < n_b; ++i) q.push_back(x[lay.q_index(1, i)]);
        double kin = 0.0;
        for (int i = 0; i < n_a; ++i) kin += x[lay.p_index(0, i)] * x[lay.p_index(0, i)] / m_a;
        for (int i = 0; i < n_b; ++i) kin += x[lay.p_index(1, i)] * x[lay.p_index(1, i)] / m_b;
        double heat = c_a * std::exp(x[lay.s_index(0)] / c_a) + c_b * std::exp(x[lay.s_index(1)] / c_b);
        return 0.5 * kin + V.value(q) + heat;
    };
    m.energy.grad = [m_a, m_b, c_a, c_b, V, lay, n_a, n_b, dim](const Vec& x) {
        require_dim(x, dim, "state");
        Vec q;
        q.reserve(n_a + n_b);
        for (int i = 0; i < n_a; ++i) q.push_back(x[lay.q_index(0, i)]);
        for (int i = 0; i < n_b; ++i) q.push_back(x[lay.q_index(1, i)]);
        Vec dV = V.grad(q);
        Vec g(dim, 0.0);
        for (int i = 0; i < n_a; ++i) {
            g[lay.q_index(0, i)] = dV[i];
            g[lay.p_index(0, i)] = x[lay.p_index(0, i)] / m_a;
        }
        for (int i = 0; i < n_b; ++i) {
            g[lay.q_index(1, i)] = dV[n_a + i];
            g[lay.p_index(1, i)] = x[lay.p_index(1, i)] / m_b;
        }
        g[lay.s_index(0)] = std::exp(x[lay.s_index(0)] / c_a);
        g[lay.s_index(1)] = std::exp(x[lay.s_index(1)] / c_b);
        return g;
    };
    return m;
}

ModelSpec quadratic_composed_system(double t_ref_a, double t_ref_b, double c_a, double c_b,
                                    double k) {
    require_positive(c_a, "heat capacity c_a");
    require_positive(c_b, "heat capacity c_b");
    require_positive(k, "wall conductivity");

    ModelSpec m;
    m.name = "quadratic_composed_system";
    m.layout = composed_layout(1, 1);
    m.conductivity = k;
    m.params = {{"t_ref_a", t_ref_a}, {"t_ref_b", t_ref_b}, {"c_a", c_a}, {"c_b", c_b}, {"k", k}};

    const StateLayout lay = m.layout;
    const int dim = lay.dim();
    m.energy.value = [t_ref_a, t_ref_b, c_a, c_b, lay, dim](const Vec& x) {
        require_dim(x, dim, "state");
        double e = 0.0;
        for (int a = 0; a < 2; ++a) {
            double q = x[lay.q_index(a, 0)];
            double p = x[lay.p_index(a, 0)];
            double s = x[lay.s_index(a)];
            double t_ref = (a == 0) ? t_ref_a : t_ref_b;
            double c = (a == 0) ? c_a : c_b;
            e += 0.5 * (p * p + q * q) + t_ref * s + s * s / (2.0 * c);
        }
        return e;
    };
    m.energy.grad = [t_ref_a, t_ref_b, c_a, c_b, lay, dim](const Vec& x) {
        require_dim(x, dim, "state");
        Vec g(dim, 0.0);
        for (int a = 0; a < 2; ++a) {
            g[lay.q_index(a, 0)] = x[lay.q_index(a, 0)];
            g[lay.p_index(a, 0)] = x[lay.p_index(a, 0)];
            double t_ref = (a == 0) ? t_ref_a : t_ref_b;
            double c = (a == 0) ? c_a : c_b;
            g[lay.s_index(a)] = t_ref + x[lay.s_index(a)] / c;
        }
        return g;
    };
    return m;
}

double temperature(const ModelSpec& model, const Vec& x, int alpha) {
    if (alpha < 0 || alpha >= model.layout.subsystems())
        throw std::out_of_range("subsystem index out of range");
    return model.energy.gradient(x)[model.layout.s_index(alpha)];
}

std::vector<double> temperatures(const ModelSpec& model, const Vec& x) {
    Vec g = model.energy.gradient(x);
    std::vector<double> out;
    out.reserve(model.layout.subsystems());
    for (int a = 0; a < model.layout.subsystems(); ++a) out.push_back(g[model.layout.s_index(a)]);
    return out;
}

double entropy_for_temperature(double heat_capacity, double T) {
    require_positive(heat_capacity, "heat capacity");
    require_positive(T, "temperature");
    return heat_capacity * std::log(T);
}

double fourier_factor(const ModelSpec& model, const Vec& x) {
    if (!model.composed()) throw std::invalid_argument("fourier_factor needs a two-component model");
    double t1 = temperature(model, x, 0);
    double t2 = temperature(model, x, 1);
    if (t1 <= kTemperatureFloor || t2 <= kTemperatureFloor)
        throw temperature_error("temperature at or below positivity floor; heat conduction model undefined");
    return model.conductivity * (1.0 / t1 - 1.0 / t2);
}

StructureMatrix structure_matrix(const ModelSpec& model, const Vec& x) {
    const StateLayout& lay = model.layout;
    require_dim(x, lay.dim(), "state");
    StructureMatrix A(lay.dim());
    for (int a = 0; a < lay.subsystems(); ++a) {
        for (int i = 0; i < lay.n_mech[a]; ++i) {
            A.set_upper(lay.q_index(a, i), lay.p_index(a, i), 1.0);
            // Simple contact systems carry the extra p-S coupling of the
            // contact bivector; composed systems do not.
            if (lay.subsystems() == 1) A.set_upper(lay.p_index(a, i), lay.s_index(a), -x[lay.p_index(a, i)]);
        }
    }
    if (lay.subsystems() == 2) {
        double k_factor = fourier_factor(model, x);
        A.set_upper(lay.s_index(0), lay.s_index(1), k_factor);
    }
    return A;
}

double entropy_production_indicator(const ModelSpec& model, const Vec& x) {
    const StateLayout& lay = model.layout;
    require_dim(x, lay.dim(), "state");
    Vec g = model.energy.gradient(x);
    double acc = 0.0;
    for (int a = 0; a < lay.subsystems(); ++a)
        for (int i = 0; i < lay.n_mech[a]; ++i) acc += x[lay.p_index(a, i)] * g[lay.p_index(a, i)];
    return acc;
}

double ContactLagrangian::value(const Vec& q, const Vec& qdot, double S) const {
    require_dim(q, n, "position");
    require_dim(qdot, n, "velocity");
    double kin = 0.0;
    for (double v : qdot) kin += v * v;
    return 0.5 * mass * kin - V.value(q) - gamma * S;
}

Vec ContactLagrangian::d_qdot(const Vec& q, const Vec& qdot, double) const {
    require_dim(q, n, "position");
    require_dim(qdot, n, "velocity");
    Vec g(qdot);
    for (double& v : g) v *= mass;
    return g;
}

Vec ContactLagrangian::d_q(const Vec& q, const Vec& qdot, double) const {
    require_dim(q, n, "position");
    require_dim(qdot, n, "velocity");
    Vec g = V.grad(q);
    for (double& v : g) v = -v;
    return g;
}

ContactLagrangian lagrangian_of(const ModelSpec& damped_model) {
    auto it_m = damped_model.params.find("mass");
    auto it_g = damped_model.params.find("gamma");
    if (it_m == damped_model.params.end() || it_g == damped_model.params.end())
        throw std::invalid_argument("model has no Lagrangian form (needs mass and gamma)");
    ContactLagrangian L;
    L.mass = it_m->second;
    L.gamma = it_g->second;
    L.n = damped_model.layout.n_mech[0];
    const ModelSpec model = damped_model;
    const int n = L.n;
    // Recover V(q) = H(q, 0, 0) - gamma*0; the stored energy closure is the
    // single source of truth.
    L.V.value = [model, n](const Vec& q) {
        Vec x(2 * n + 1, 0.0);
        for (int i = 0; i < n; ++i) x[i] = q[i];
        return model.energy.value(x);
    };
    L.V.grad = [model, n](const Vec& q) {
        Vec x(2 * n + 1, 0.0);
        for (int i = 0; i < n; ++i) x[i] = q[i];
        Vec g = model.energy.gradient(x);
        return Vec(g.begin(), g.begin() + n);
    };
    return L;
}

}  // namespace contactdg
