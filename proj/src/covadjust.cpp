#include "sparda/covadjust.hpp"

#include <Eigen/QR>

#include <cmath>
#include <string>

namespace sparda {

Matrix Adjustment::apply(const Matrix& x, const Matrix& u) const
{
    if (u.rows() != x.rows()) throw DimensionError("covariates and predictors have different row counts");
    if (u.cols() != alpha.rows())
        throw DimensionError("expected " + std::to_string(alpha.rows()) + " covariates, got " +
                             std::to_string(u.cols()));
    if (x.cols() != alpha.cols()) throw DimensionError("adjustment: predictor width mismatch");
    return x - u * alpha;
}

DiscriminantRule Adjustment::extend(const DiscriminantRule& rule) const
{
    DiscriminantRule out = rule;
    auto term = std::make_shared<CovariateTerm>();
    term->alpha = alpha;
    term->gamma = gamma;
    for (Index k = 1; k < gamma.cols(); ++k)
        out.intercept[k] -= 0.5 * gamma.col(k).dot((phi.row(k) + phi.row(0)).transpose());
    out.covariates = std::move(term);
    return out;
}

AdjustedData adjvec(const Matrix& x, const Matrix& u, const Labels& y, Index K)
{
    const Index n = x.rows();
    if (u.rows() != n || y.size() != n) throw DimensionError("adjvec: x, u and y must have the same row count");
    const Index q = u.cols();
    if (q == 0) throw DimensionError("adjvec: no covariates");
    if (n - K <= q) throw EstimationError("adjvec: need n - K > q to estimate the covariate effect");

    const ClassStats us = estimate_stats(u, y, K);
    const ClassStats xs = estimate_stats(x, y, K);
    const Matrix ut = within_class_centered(u, y, us.means);
    const Matrix xt = within_class_centered(x, y, xs.means);

    const Matrix gram = ut.transpose() * ut;
    Eigen::ColPivHouseholderQR<Matrix> qr(gram);
    if (qr.rank() < q)
        throw EstimationError("covariate Gram matrix is singular; check for constant or collinear covariates");

    AdjustedData out;
    Adjustment& a = out.adjustment;
    a.alpha = qr.solve(ut.transpose() * xt);
    a.phi = us.means;
    a.psi = gram / static_cast<Scalar>(n - K);
    a.gamma = Matrix::Zero(q, K);
    Eigen::ColPivHouseholderQR<Matrix> psi_qr(a.psi);
    for (Index k = 1; k < K; ++k) a.gamma.col(k) = psi_qr.solve((us.means.row(k) - us.means.row(0)).transpose());
    out.x = a.apply(x, u);
    return out;
}

Tensor AdjustedTensors::alpha_tensor(Index r, const Dims& dims) const
{
    return Tensor(dims, adjustment.alpha.row(r).transpose());
}

AdjustedTensors adjten(const std::vector<Tensor>& x, const Matrix& u, const Labels& y, Index K)
{
    if (x.empty()) throw DimensionError("adjten: no observations");
    const Dims& dims = x.front().dims();
    Matrix flat(static_cast<Index>(x.size()), dims_product(dims));
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].dims() != dims) throw DimensionError("adjten: tensors have differing dims");
        flat.row(static_cast<Index>(i)) = x[i].vec().transpose();
    }
    AdjustedData a = adjvec(flat, u, y, K);
    AdjustedTensors out;
    out.adjustment = std::move(a.adjustment);
    out.x.reserve(x.size());
    for (Index i = 0; i < a.x.rows(); ++i) out.x.emplace_back(dims, a.x.row(i).transpose());
    return out;
}

} // namespace sparda
