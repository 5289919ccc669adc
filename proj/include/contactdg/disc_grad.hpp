#pragma once

#include <string>

#include "contactdg/scalar_field.hpp"
#include "contactdg/state.hpp"

namespace contactdg {

/**
 * Discrete gradients: two-point gradient surrogates nabla_bar H(x, x')
 * satisfying
 *
 *   (a)  nabla_bar H(x,x') . (x' - x) = H(x') - H(x)
 *   (b)  nabla_bar H(x,x)            = grad H(x)
 *
 * Three rules are provided. The mean-value rule integrates grad H along the
 * segment with fixed-order Gauss-Legendre quadrature, so (a) is exact only
 * up to the quadrature error (exact for polynomials of degree <=
 * 2*order - 1); prefer the midpoint or coordinate-increment rule for
 * exponential energies. The midpoint (Gonzalez) rule and the coordinate
 * increment (Itoh-Abe) rule satisfy (a) to roundoff for any smooth H.
 */
enum class DiscreteGradientKind {
    MeanValue,            // averaged gradient along the segment
    Midpoint,             // gradient at the midpoint + rank-one correction
    CoordinateIncrement,  // per-coordinate divided differences
};

struct DiscreteGradientOptions {
    int quadrature_order = 8;  // Gauss-Legendre points for MeanValue
    // Points closer than coincidence_scale*(1+|x|) collapse to grad H; same
    // scale decides per-coordinate fallbacks in the increment rule.
    double coincidence_scale = 1e-12;
};

Covector discrete_gradient(DiscreteGradientKind kind, const ScalarField& H, const Vec& x,
                           const Vec& xp, const DiscreteGradientOptions& opt = {});

/// Config names: "avf", "gonzalez", "itoh-abe".
DiscreteGradientKind discrete_gradient_kind_from_name(const std::string& name);
std::string discrete_gradient_kind_name(DiscreteGradientKind kind);

/// Nodes and weights on [0,1], exact for polynomials of degree 2n-1.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre_unit(int n);

}  // namespace contactdg
