#pragma once

// Dense M-way tensors stored in column-major (mode-1 fastest) order, so the
// flat buffer *is* vec(A). Modes are 0-based throughout the API.

#include "sparda/rng.hpp"
#include "sparda/types.hpp"

#include <Eigen/Cholesky>

#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sparda {

using Dims = std::vector<Index>;

inline Index dims_product(std::span<const Index> dims)
{
    return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

inline std::string dims_to_string(std::span<const Index> dims)
{
    std::string s;
    for (std::size_t m = 0; m < dims.size(); ++m) {
        if (m) s += "x";
        s += std::to_string(dims[m]);
    }
    return s;
}

/// Offset of a multi-index (0-based) into vec(A):
/// i_1 + p_1 i_2 + p_1 p_2 i_3 + ...
inline Index linear_index(std::span<const Index> dims, std::span<const Index> idx)
{
    if (idx.size() != dims.size()) throw DimensionError("linear_index: index arity does not match tensor order");
    Index offset = 0;
    Index stride = 1;
    for (std::size_t m = 0; m < dims.size(); ++m) {
        if (idx[m] < 0 || idx[m] >= dims[m]) throw DimensionError("linear_index: index out of range");
        offset += stride * idx[m];
        stride *= dims[m];
    }
    return offset;
}

/// Inverse of linear_index.
inline Dims multi_index(std::span<const Index> dims, Index offset)
{
    Dims idx(dims.size());
    for (std::size_t m = 0; m < dims.size(); ++m) {
        idx[m] = offset % dims[m];
        offset /= dims[m];
    }
    return idx;
}

template <class T>
class DenseTensor {
public:
    using Scalar = T;
    using VectorType = Eigen::VectorX<T>;

    DenseTensor() = default;

    explicit DenseTensor(Dims dims) : dims_(std::move(dims))
    {
        validate_dims();
        data_ = VectorType::Zero(dims_product(dims_));
    }

    DenseTensor(Dims dims, VectorType data) : dims_(std::move(dims)), data_(std::move(data))
    {
        validate_dims();
        if (data_.size() != dims_product(dims_))
            throw DimensionError("DenseTensor: data length " + std::to_string(data_.size()) +
                                 " does not match dims " + dims_to_string(dims_));
    }

    static DenseTensor zeros(Dims dims) { return DenseTensor(std::move(dims)); }

    const Dims& dims() const { return dims_; }
    Index order() const { return static_cast<Index>(dims_.size()); }
    Index size() const { return data_.size(); }
    Index dim(Index mode) const { return dims_.at(static_cast<std::size_t>(mode)); }

    /// vec(A).
    const VectorType& vec() const { return data_; }

    T operator()(std::initializer_list<Index> idx) const
    {
        return data_[linear_index(dims_, std::span<const Index>(idx.begin(), idx.size()))];
    }
    T at(std::span<const Index> idx) const { return data_[linear_index(dims_, idx)]; }

    bool operator==(const DenseTensor& other) const { return dims_ == other.dims_ && data_ == other.data_; }

private:
    void validate_dims() const
    {
        if (dims_.empty()) throw DimensionError("DenseTensor: at least one mode required");
        for (Index p : dims_)
            if (p < 1) throw DimensionError("DenseTensor: dims must be positive");
    }

    Dims dims_;
    VectorType data_;
};

using Tensor = DenseTensor<Scalar>;

namespace detail {

inline void check_mode(Index order, Index mode)
{
    if (mode < 0 || mode >= order)
        throw DimensionError("mode " + std::to_string(mode) + " out of range for a " + std::to_string(order) +
                             "-way tensor");
}

// (left, p_mode, right) block sizes for a mode.
inline std::array<Index, 3> mode_blocks(std::span<const Index> dims, Index mode)
{
    Index left = 1;
    Index right = 1;
    for (Index m = 0; m < static_cast<Index>(dims.size()); ++m) {
        if (m < mode) left *= dims[m];
        if (m > mode) right *= dims[m];
    }
    return {left, dims[mode], right};
}

} // namespace detail

/// Mode-k unfolding A_(k): p_k x prod_{l != k} p_l, columns are mode-k fibers,
/// remaining modes enumerated lowest-first.
template <class T>
Eigen::MatrixX<T> unfold(const DenseTensor<T>& t, Index mode)
{
    detail::check_mode(t.order(), mode);
    const auto [left, pk, right] = detail::mode_blocks(t.dims(), mode);
    Eigen::MatrixX<T> out(pk, left * right);
    const T* src = t.vec().data();
    for (Index b = 0; b < right; ++b) {
        Eigen::Map<const Eigen::MatrixX<T>> block(src + b * left * pk, left, pk);
        out.middleCols(b * left, left) = block.transpose();
    }
    return out;
}

template <class T, class Derived>
DenseTensor<T> refold_as(const Eigen::MatrixBase<Derived>& mat, Index mode, Dims dims)
{
    detail::check_mode(static_cast<Index>(dims.size()), mode);
    const auto [left, pk, right] = detail::mode_blocks(dims, mode);
    if (mat.rows() != pk || mat.cols() != left * right)
        throw DimensionError("refold: matrix shape does not match dims " + dims_to_string(dims));
    Eigen::VectorX<T> data(left * pk * right);
    for (Index b = 0; b < right; ++b) {
        Eigen::Map<Eigen::MatrixX<T>> block(data.data() + b * left * pk, left, pk);
        block = mat.middleCols(b * left, left).transpose();
    }
    return DenseTensor<T>(std::move(dims), std::move(data));
}

/// Inverse of unfold.
template <class Derived>
DenseTensor<typename Derived::Scalar> refold(const Eigen::MatrixBase<Derived>& mat, Index mode, Dims dims)
{
    return refold_as<typename Derived::Scalar>(mat, mode, std::move(dims));
}

/// A x_k G for G of shape d x p_k. Result has p_k replaced by d.
template <class T, class Derived>
DenseTensor<T> mode_product(const DenseTensor<T>& t, Index mode, const Eigen::MatrixBase<Derived>& g)
{
    detail::check_mode(t.order(), mode);
    const auto [left, pk, right] = detail::mode_blocks(t.dims(), mode);
    if (g.cols() != pk)
        throw DimensionError("mode_product: matrix has " + std::to_string(g.cols()) + " columns, mode " +
                             std::to_string(mode) + " has extent " + std::to_string(pk));
    const Index d = g.rows();
    Dims out_dims = t.dims();
    out_dims[static_cast<std::size_t>(mode)] = d;
    Eigen::VectorX<T> data(left * d * right);
    const Eigen::MatrixX<T> gt = g.transpose();
    for (Index b = 0; b < right; ++b) {
        Eigen::Map<const Eigen::MatrixX<T>> in(t.vec().data() + b * left * pk, left, pk);
        Eigen::Map<Eigen::MatrixX<T>> out(data.data() + b * left * d, left, d);
        out.noalias() = in * gt;
    }
    return DenseTensor<T>(std::move(out_dims), std::move(data));
}

/// Mode-k vector product A x̄_k c, an (M-1)-way tensor. For M = 1 the result
/// is a 1-element tensor holding the dot product.
template <class T, class Derived>
DenseTensor<T> mode_vector_product(const DenseTensor<T>& t, Index mode, const Eigen::MatrixBase<Derived>& c)
{
    const DenseTensor<T> full = mode_product(t, mode, c.transpose());
    if (t.order() == 1) return full;
    Dims squeezed = t.dims();
    squeezed.erase(squeezed.begin() + mode);
    return DenseTensor<T>(std::move(squeezed), full.vec());
}

/// [[C; G_1, ..., G_M]] = C x_1 G_1 x_2 ... x_M G_M.
template <class T>
DenseTensor<T> tucker_transform(const DenseTensor<T>& c, std::span<const Eigen::MatrixX<T>> gs)
{
    if (static_cast<Index>(gs.size()) != c.order())
        throw DimensionError("tucker_transform: need one matrix per mode");
    DenseTensor<T> out = c;
    for (Index m = 0; m < c.order(); ++m) out = mode_product(out, m, gs[static_cast<std::size_t>(m)]);
    return out;
}

template <class T>
DenseTensor<T> tucker_transform(const DenseTensor<T>& c, const std::vector<Eigen::MatrixX<T>>& gs)
{
    return tucker_transform(c, std::span<const Eigen::MatrixX<T>>(gs));
}

template <class T>
T inner(const DenseTensor<T>& a, const DenseTensor<T>& b)
{
    if (a.dims() != b.dims())
        throw DimensionError("inner: dims " + dims_to_string(a.dims()) + " vs " + dims_to_string(b.dims()));
    return a.vec().dot(b.vec());
}

template <class T>
struct TensorNormalParams {
    DenseTensor<T> mean;
    std::vector<Eigen::MatrixX<T>> mode_covs;
};

/// Draws X = mu + [[Z; L_1, ..., L_M]] with L_m the lower Cholesky factor of
/// Sigma_m. Factors are computed once at construction.
template <class T>
class TensorNormalSampler {
public:
    explicit TensorNormalSampler(TensorNormalParams<T> params) : params_(std::move(params))
    {
        const Dims& dims = params_.mean.dims();
        if (params_.mode_covs.size() != dims.size())
            throw DimensionError("TensorNormalSampler: need one covariance per mode");
        factors_.reserve(dims.size());
        for (std::size_t m = 0; m < dims.size(); ++m) {
            const auto& cov = params_.mode_covs[m];
            if (cov.rows() != dims[m] || cov.cols() != dims[m])
                throw DimensionError("TensorNormalSampler: covariance " + std::to_string(m) + " has wrong shape");
            Eigen::LLT<Eigen::MatrixX<T>> llt(cov);
            if (llt.info() != Eigen::Success)
                throw FactorizationError("TensorNormalSampler: covariance " + std::to_string(m) +
                                         " is not positive definite");
            factors_.push_back(llt.matrixL());
        }
    }

    DenseTensor<T> operator()(Rng& rng) const
    {
        Eigen::VectorX<T> z(params_.mean.size());
        for (Index i = 0; i < z.size(); ++i) z[i] = static_cast<T>(rng.normal());
        return add_mean(tucker_transform(DenseTensor<T>(params_.mean.dims(), std::move(z)), factors_));
    }

    const std::vector<Eigen::MatrixX<T>>& factors() const { return factors_; }

private:
    DenseTensor<T> add_mean(const DenseTensor<T>& centred) const
    {
        return DenseTensor<T>(centred.dims(), centred.vec() + params_.mean.vec());
    }

    TensorNormalParams<T> params_;
    std::vector<Eigen::MatrixX<T>> factors_;
};

template <class T>
DenseTensor<T> sample_tensor_normal(const TensorNormalParams<T>& params, Rng& rng)
{
    return TensorNormalSampler<T>(params)(rng);
}

} // namespace sparda
