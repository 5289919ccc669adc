#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace contactdg {

using Vec = std::vector<double>;

// Coordinate vectors are flat doubles. Tangents index like states; covectors
// are gradients (the Euclidean identification of T*Q x R with R^{2n+m}).
using Tangent = Vec;
using Covector = Vec;

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct temperature_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Layout of the flattened phase-space vector. One block per subsystem, each
// block ordered (q_1..q_n, p_1..p_n, S). A simple system is a single block
// (q, p, S); a two-component heat-exchange system is
// (q1, p1, S1, q2, p2, S2), matching the block structure matrix.
struct StateLayout {
    std::vector<int> n_mech;  // mechanical dofs per subsystem

    StateLayout() = default;
    explicit StateLayout(std::vector<int> dims) : n_mech(std::move(dims)) {}

    int subsystems() const { return static_cast<int>(n_mech.size()); }
    int thermal_count() const { return subsystems(); }

    int block_offset(int sub) const {
        int off = 0;
        for (int a = 0; a < sub; ++a) off += 2 * n_mech[a] + 1;
        return off;
    }
    int dim() const { return block_offset(subsystems()); }

    int q_index(int sub, int i) const { return block_offset(sub) + i; }
    int p_index(int sub, int i) const { return block_offset(sub) + n_mech[sub] + i; }
    int s_index(int sub) const { return block_offset(sub) + 2 * n_mech[sub]; }

    /// Column names for CSV output: q1, p1, S1 (with _i suffixes when a
    /// subsystem has more than one mechanical dof).
    std::vector<std::string> component_names() const;

    bool operator==(const StateLayout&) const = default;
};

inline StateLayout simple_layout(int n) { return StateLayout{{n}}; }
inline StateLayout composed_layout(int n1, int n2) { return StateLayout{{n1, n2}}; }

// -- small vector helpers used throughout ------------------------------------

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
Vec axpy(double alpha, const Vec& x, const Vec& y);  // alpha*x + y
Vec scale(double alpha, const Vec& x);
Vec midpoint(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);

void require_dim(const Vec& v, std::size_t n, const char* what);

}  // namespace contactdg
