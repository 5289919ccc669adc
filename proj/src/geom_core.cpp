#include "contactdg/geom_core.hpp"

#include <string>

namespace contactdg {
namespace geom {

int mech_dim(const Vec& x) {
    if (x.empty() || x.size() % 2 == 0)
        throw dimension_error("contact state must have odd dimension 2n+1, got " +
                              std::to_string(x.size()));
    return static_cast<int>(x.size() / 2);
}

double contact_form(const Vec& x, const Tangent& v) {
    const int n = mech_dim(x);
    require_dim(v, x.size(), "contact_form");
    double val = v[2 * n];
    for (int i = 0; i < n; ++i) val -= x[n + i] * v[i];
    return val;
}

Tangent reeb(const Vec& x) {
    const int n = mech_dim(x);
    Tangent r(x.size(), 0.0);
    r[2 * n] = 1.0;
    return r;
}

Tangent project(const Vec& x, const Tangent& v, Projection which) {
    const int n = mech_dim(x);
    require_dim(v, x.size(), "project");
    const double eta_v = contact_form(x, v);
    Tangent out(x.size(), 0.0);
    if (which == Projection::Vertical) {
        out[2 * n] = eta_v;
        return out;
    }
    out = v;
    out[2 * n] -= eta_v;
    return out;
}

Tangent hamiltonian_vf(const ScalarField& f, const Vec& x) {
    const int n = mech_dim(x);
    const Covector df = f.gradient(x);
    const double fval = f(x);
    Tangent v(x.size());
    double s_dot = -fval;
    for (int i = 0; i < n; ++i) {
        v[i] = df[n + i];
        v[n + i] = -(df[i] + x[n + i] * df[2 * n]);
        s_dot += x[n + i] * df[n + i];
    }
    v[2 * n] = s_dot;
    return v;
}

Tangent evolution_vf(const ScalarField& f, const Vec& x) {
    const int n = mech_dim(x);
    const Covector df = f.gradient(x);
    Tangent v(x.size());
    double s_dot = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = df[n + i];
        v[n + i] = -(df[i] + x[n + i] * df[2 * n]);
        s_dot += x[n + i] * df[n + i];
    }
    v[2 * n] = s_dot;
    return v;
}

Tangent bivector_sharp(const Vec& x, const Covector& alpha) {
    const int n = mech_dim(x);
    require_dim(alpha, x.size(), "bivector_sharp");
    Tangent v(x.size());
    double s_dot = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = alpha[n + i];
        v[n + i] = -(alpha[i] + x[n + i] * alpha[2 * n]);
        s_dot += x[n + i] * alpha[n + i];
    }
    v[2 * n] = s_dot;
    return v;
}

namespace {

double cartan(const Vec& x, const Covector& df, const Covector& dg, int n) {
    // Lambda(df, dg) with Lambda = d_p ^ (d_q + p d_S)
    double val = 0.0;
    for (int i = 0; i < n; ++i) {
        val += df[n + i] * (dg[i] + x[n + i] * dg[2 * n]);
        val -= dg[n + i] * (df[i] + x[n + i] * df[2 * n]);
    }
    return val;
}

double poisson0(const Covector& df, const Covector& dg, int n) {
    double val = 0.0;
    for (int i = 0; i < n; ++i) val += df[n + i] * dg[i] - dg[n + i] * df[i];
    return val;
}

double delta_q_part(const Vec& x, const Covector& df, const Covector& dg, int n) {
    double lf = 0.0, lg = 0.0;
    for (int i = 0; i < n; ++i) {
        lf += x[n + i] * df[n + i];
        lg += x[n + i] * dg[n + i];
    }
    return dg[2 * n] * lf - df[2 * n] * lg;
}

}  // namespace

double bracket(BracketKind kind, const ScalarField& f, const ScalarField& g, const Vec& x) {
    const int n = mech_dim(x);
    const Covector df = f.gradient(x);
    const Covector dg = g.gradient(x);
    require_dim(df, x.size(), "bracket df");
    require_dim(dg, x.size(), "bracket dg");
    switch (kind) {
        case BracketKind::Cartan:
            return cartan(x, df, dg, n);
        case BracketKind::Poisson0:
            return poisson0(df, dg, n);
        case BracketKind::DeltaQ:
            return delta_q_part(x, df, dg, n);
        case BracketKind::Jacobi:
            // Lambda(df,dg) + f E(g) - g E(f) with E = -R
            return cartan(x, df, dg, n) - f(x) * dg[2 * n] + g(x) * df[2 * n];
    }
    throw dimension_error("bracket: unknown kind");
}

double liouville_delta_q(const ScalarField& f, const Vec& x) {
    const int n = mech_dim(x);
    const Covector df = f.gradient(x);
    double val = 0.0;
    for (int i = 0; i < n; ++i) val += x[n + i] * df[n + i];
    return val;
}

}  // namespace geom
}  // namespace contactdg
