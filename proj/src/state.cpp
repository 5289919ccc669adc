#include "contactdg/state.hpp"

#include <cmath>

namespace contactdg {

std::vector<std::string> StateLayout::component_names() const {
    std::vector<std::string> names;
    for (int a = 0; a < subsystems(); ++a) {
        const std::string sub = std::to_string(a + 1);
        for (int i = 0; i < n_mech[a]; ++i) {
            std::string suffix = n_mech[a] > 1 ? "_" + std::to_string(i + 1) : "";
            names.push_back("q" + sub + suffix);
        }
        for (int i = 0; i < n_mech[a]; ++i) {
            std::string suffix = n_mech[a] > 1 ? "_" + std::to_string(i + 1) : "";
            names.push_back("p" + sub + suffix);
        }
        names.push_back("S" + sub);
    }
    return names;
}

double dot(const Vec& a, const Vec& b) {
    require_dim(b, a.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Vec axpy(double alpha, const Vec& x, const Vec& y) {
    require_dim(y, x.size(), "axpy");
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = alpha * x[i] + y[i];
    return r;
}

Vec scale(double alpha, const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = alpha * x[i];
    return r;
}

Vec midpoint(const Vec& a, const Vec& b) {
    require_dim(b, a.size(), "midpoint");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = 0.5 * (a[i] + b[i]);
    return r;
}

bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

void require_dim(const Vec& v, std::size_t n, const char* what) {
    if (v.size() != n)
        throw dimension_error(std::string(what) + ": expected dimension " + std::to_string(n) +
                              ", got " + std::to_string(v.size()));
}

}  // namespace contactdg
