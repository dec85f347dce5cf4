#pragma once

#include "sparda/tensor.hpp"
#include "sparda/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sparda {

/// n labelled observations. Rows of x are vec(X_i); dims = {p} for vector
/// predictors. Labels are the caller's integer codes.
struct Dataset {
    Dims dims;
    Matrix x;
    std::vector<int> y;
    std::optional<Matrix> u;

    Index n() const { return x.rows(); }
    Index num_features() const { return x.cols(); }
    Index num_covariates() const { return u ? u->cols() : 0; }
    bool is_tensor() const { return dims.size() > 1; }
    bool has_labels() const { return !y.empty(); }

    /// Throws DimensionError when the pieces disagree.
    void validate() const;

    Dataset rows(std::span<const Index> idx) const;

    Tensor tensor(Index i) const { return Tensor(dims, x.row(i).transpose()); }
};

} // namespace sparda
