#pragma once

#include "sparda/stats.hpp"
#include "sparda/tensor.hpp"

#include <memory>

namespace sparda {

/// Within-class regression of predictors on low-dimensional covariates plus
/// the covariate side of the Bayes rule.
struct Adjustment {
    Matrix alpha; // q x P; row r holds the loadings of covariate r on every entry
    Matrix phi;   // K x q class means of u
    Matrix psi;   // q x q pooled covariance of u (n - K denominator)
    Matrix gamma; // q x K, column 0 zero: psi^{-1}(phi_k - phi_0)

    Index num_covariates() const { return alpha.rows(); }

    /// x - u * alpha, row by row.
    Matrix apply(const Matrix& x, const Matrix& u) const;

    /// Rule pieces for an adjusted-predictor rule: adds gamma and the
    /// -gamma_k'(phi_k + phi_0)/2 intercept shift.
    DiscriminantRule extend(const DiscriminantRule& rule) const;
};

struct AdjustedData {
    Adjustment adjustment;
    Matrix x; // adjusted predictors, same shape as input
};

AdjustedData adjvec(const Matrix& x, const Matrix& u, const Labels& y, Index K);

struct AdjustedTensors {
    Adjustment adjustment;
    std::vector<Tensor> x;
    /// alpha for covariate r viewed as a tensor with the predictor dims.
    Tensor alpha_tensor(Index r, const Dims& dims) const;
};

/// Same regression entry by entry for tensor predictors; alpha rows are
/// vec-ordered tensors.
AdjustedTensors adjten(const std::vector<Tensor>& x, const Matrix& u, const Labels& y, Index K);

} // namespace sparda
