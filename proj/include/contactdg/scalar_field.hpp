#pragma once

#include <functional>

#include "contactdg/state.hpp"

namespace contactdg {

/**
 * A smooth function on phase space together with its gradient.
 *
 * When no analytic gradient is supplied, central finite differences with
 * step 1e-6 * max(1, |x|_inf) are used. Built-in models always provide
 * analytic gradients so that bracket and vector-field evaluations stay exact.
 */
struct ScalarField {
    std::function<double(const Vec&)> value;
    std::function<Covector(const Vec&)> grad;  // may be empty

    double operator()(const Vec& x) const { return value(x); }

    Covector gradient(const Vec& x) const {
        if (grad) return grad(x);
        return fd_gradient(x);
    }

    Covector fd_gradient(const Vec& x) const;
};

/// Central-difference gradient of an arbitrary callable, used by the
/// fallback above and by gradient-consistency tests.
Covector central_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                                     double step);

}  // namespace contactdg
