#pragma once

#include "contactdg/scalar_field.hpp"
#include "contactdg/state.hpp"

namespace contactdg {

/**
 * Coordinate realization of the canonical contact structure on T*Q x R with
 * Q = R^n. States are flat vectors (q_1..q_n, p_1..p_n, S) of odd dimension
 * 2n+1; the contact form is eta = dS - p_i dq^i and the Reeb field is d/dS.
 *
 * Everything here is a pure evaluation at a point: the contact form paired
 * with a tangent vector, the horizontal/vertical projectors, the Hamiltonian
 * (contact) and evolution vector fields of a scalar function, the bivector
 * sharp map, and the four brackets (Jacobi, Cartan, canonical-Poisson part,
 * thermodynamic Delta_Q part). Two-component heat-exchange structures are
 * not contact structures and live with the models instead.
 */
namespace geom {

/// Number of mechanical dofs encoded in a (2n+1)-vector; rejects even sizes.
int mech_dim(const Vec& x);

/// eta_x(v) = v_S - sum_i p_i v_{q_i}.
double contact_form(const Vec& x, const Tangent& v);

/// R = d/dS: unit vector in the entropy slot.
Tangent reeb(const Vec& x);

enum class Projection { Horizontal, Vertical };

/// P = Id - R (x) eta projects onto ker eta; Q = R (x) eta onto the Reeb line.
Tangent project(const Vec& x, const Tangent& v, Projection which);

/// X_f = (df/dp_i) d_q - (df/dq^i + p_i df/dS) d_p + (p_i df/dp_i - f) d_S.
/// Dissipates f at rate -(df/dS) f; preserves ker eta conformally.
Tangent hamiltonian_vf(const ScalarField& f, const Vec& x);

/// E_f = X_f + f R: conserves f and stays tangent to ker eta. The S slot
/// carries p_i df/dp_i, the entropy production of the isolated system.
Tangent evolution_vf(const ScalarField& f, const Vec& x);

/// sharp_Lambda(alpha): evolution_vf(f, x) == bivector_sharp(x, df(x)).
Tangent bivector_sharp(const Vec& x, const Covector& alpha);

enum class BracketKind {
    Jacobi,   // Lambda(df,dg) + f E(g) - g E(f), E = -R
    Cartan,   // Lambda(df,dg); Leibniz but no Jacobi identity
    Poisson0, // canonical d_p ^ d_q part
    DeltaQ,   // (dg/dS) Delta_Q f - (df/dS) Delta_Q g
};

/// All four brackets are bilinear and skew-symmetric; Cartan splits as
/// Poisson0 + DeltaQ (single-generator form).
double bracket(BracketKind kind, const ScalarField& f, const ScalarField& g, const Vec& x);

/// Liouville derivative Delta_Q f = p_i df/dp_i. For the evolution flow this
/// is dS/dt; its sign decides the second law.
double liouville_delta_q(const ScalarField& f, const Vec& x);

}  // namespace geom

}  // namespace contactdg
