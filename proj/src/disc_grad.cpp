#include "contactdg/disc_grad.hpp"

#include <cmath>
#include <stdexcept>

namespace contactdg {

Quadrature gauss_legendre_unit(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_unit: order must be >= 1");
    // Roots of P_n by Newton iteration, then map [-1,1] -> [0,1].
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        q.nodes[i] = 0.5 * (1.0 - z);
        q.nodes[n - 1 - i] = 0.5 * (1.0 + z);
        q.weights[i] = 0.5 * w;
        q.weights[n - 1 - i] = 0.5 * w;
    }
    return q;
}

namespace {

Covector mean_value_gradient(const ScalarField& H, const Vec& x, const Vec& xp, int order) {
    const Quadrature q = gauss_legendre_unit(order);
    Covector g(x.size(), 0.0);
    Vec pt(x.size());
    for (int k = 0; k < order; ++k) {
        const double xi = q.nodes[k];
        for (std::size_t i = 0; i < x.size(); ++i) pt[i] = (1.0 - xi) * x[i] + xi * xp[i];
        const Covector dg = H.gradient(pt);
        for (std::size_t i = 0; i < x.size(); ++i) g[i] += q.weights[k] * dg[i];
    }
    return g;
}

Covector midpoint_gradient(const ScalarField& H, const Vec& x, const Vec& xp, double eps) {
    const Vec mid = midpoint(x, xp);
    Covector g = H.gradient(mid);
    Vec diff(x.size());
    double dist2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        diff[i] = xp[i] - x[i];
        dist2 += diff[i] * diff[i];
    }
    // Near-coincident points: the correction's limit is the plain gradient.
    if (std::sqrt(dist2) < eps) return g;
    const double corr = (H(xp) - H(x) - dot(g, diff)) / dist2;
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += corr * diff[i];
    return g;
}

Covector coordinate_increment_gradient(const ScalarField& H, const Vec& x, const Vec& xp,
                                       double eps) {
    const std::size_t n = x.size();
    Covector g(n);
    // walk holds (x'_1, .., x'_{i-1}, x_i, .., x_n); advance one slot at a time.
    Vec walk = x;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(xp[i] - x[i]) < eps) {
            const Covector dH = H.gradient(walk);
            g[i] = dH[i];
            walk[i] = xp[i];
        } else {
            const double lo = H(walk);
            walk[i] = xp[i];
            const double hi = H(walk);
            g[i] = (hi - lo) / (xp[i] - x[i]);
        }
    }
    return g;
}

}  // namespace

Covector discrete_gradient(DiscreteGradientKind kind, const ScalarField& H, const Vec& x,
                           const Vec& xp, const DiscreteGradientOptions& opt) {
    require_dim(xp, x.size(), "discrete_gradient");
    const double eps = opt.coincidence_scale * (1.0 + norm2(x));
    switch (kind) {
        case DiscreteGradientKind::MeanValue:
            if (norm2(axpy(-1.0, x, xp)) < eps) return H.gradient(x);
            return mean_value_gradient(H, x, xp, opt.quadrature_order);
        case DiscreteGradientKind::Midpoint:
            return midpoint_gradient(H, x, xp, eps);
        case DiscreteGradientKind::CoordinateIncrement:
            return coordinate_increment_gradient(H, x, xp, eps);
    }
    throw std::invalid_argument("discrete_gradient: unknown kind");
}

DiscreteGradientKind discrete_gradient_kind_from_name(const std::string& name) {
    if (name == "avf" || name == "mean-value") return DiscreteGradientKind::MeanValue;
    if (name == "gonzalez" || name == "midpoint") return DiscreteGradientKind::Midpoint;
    if (name == "itoh-abe" || name == "coordinate-increment")
        return DiscreteGradientKind::CoordinateIncrement;
    throw std::invalid_argument("unknown discrete gradient kind: " + name);
}

std::string discrete_gradient_kind_name(DiscreteGradientKind kind) {
    switch (kind) {
        case DiscreteGradientKind::MeanValue: return "avf";
        case DiscreteGradientKind::Midpoint: return "gonzalez";
        case DiscreteGradientKind::CoordinateIncrement: return "itoh-abe";
    }
    return "?";
}

}  // namespace contactdg
