#include "contactdg/scalar_field.hpp"

#include <algorithm>
#include <cmath>

namespace contactdg {

Covector central_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                                     double step) {
    Covector g(x.size());
    Vec xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        g[i] = (f(xp) - f(xm)) / (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

Covector ScalarField::fd_gradient(const Vec& x) const {
    const double step = 1e-6 * std::max(1.0, norm_inf(x));
    return central_difference_gradient(value, x, step);
}

}  // namespace contactdg
