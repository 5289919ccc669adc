#pragma once

#include "contactdg/state.hpp"

namespace contactdg {

/**
 * Point-dependent skew-symmetric structure matrix. Only set_upper() exists
 * for writing, which mirrors each entry with its negative, so skew-symmetry
 * is exact by construction. apply() realizes the sharp map: tangent = A *
 * covector.
 */
class StructureMatrix {
public:
    explicit StructureMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, 0.0) {}

    int dim() const { return dim_; }

    void set_upper(int i, int j, double v) {
        if (i >= j) throw dimension_error("StructureMatrix::set_upper requires i < j");
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = -v;
    }

    double operator()(int i, int j) const { return a_[idx(i, j)]; }

    Tangent apply(const Covector& alpha) const {
        require_dim(alpha, static_cast<std::size_t>(dim_), "StructureMatrix::apply");
        Tangent out(dim_, 0.0);
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) s += a_[idx(i, j)] * alpha[j];
            out[i] = s;
        }
        return out;
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * dim_ + j;
    }

    int dim_;
    std::vector<double> a_;
};

}  // namespace contactdg
