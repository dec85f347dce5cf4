#include "sparda/dataset.hpp"

#include <string>

namespace sparda {

void Dataset::validate() const
{
    if (dims.empty()) throw DimensionError("dataset: dims are empty");
    if (dims_product(dims) != x.cols())
        throw DimensionError("dataset: dims " + dims_to_string(dims) + " need " + std::to_string(dims_product(dims)) +
                             " predictor columns, found " + std::to_string(x.cols()));
    if (!y.empty() && static_cast<Index>(y.size()) != x.rows())
        throw DimensionError("dataset: " + std::to_string(y.size()) + " labels for " + std::to_string(x.rows()) +
                             " rows");
    if (u && u->rows() != x.rows()) throw DimensionError("dataset: covariate row count differs from predictors");
}

Dataset Dataset::rows(std::span<const Index> idx) const
{
    Dataset out;
    out.dims = dims;
    out.x.resize(static_cast<Index>(idx.size()), x.cols());
    if (u) out.u = Matrix(static_cast<Index>(idx.size()), u->cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const Index i = idx[r];
        out.x.row(static_cast<Index>(r)) = x.row(i);
        if (u) out.u->row(static_cast<Index>(r)) = u->row(i);
        if (!y.empty()) out.y.push_back(y[static_cast<std::size_t>(i)]);
    }
    return out;
}

} // namespace sparda
