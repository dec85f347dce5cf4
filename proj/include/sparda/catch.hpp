#pragma once

#include "sparda/msda.hpp"
#include "sparda/tensor.hpp"

#include <vector>

namespace sparda {

/// Separable covariance Sigma_M (x) ... (x) Sigma_1 with Sigma_j(0,0) = 1 for
/// j < M; the overall scale lives in Sigma_M.
struct KroneckerCov {
    std::vector<Matrix> sigma;

    Index order() const { return static_cast<Index>(sigma.size()); }
    Dims dims() const;
    /// The explicit P x P matrix (small problems and tests only).
    Matrix full() const;
};

/// x holds vec(X_i) in its rows.
KroneckerCov estimate_kron_cov(const Matrix& x, const Labels& y, Index K, const Dims& dims);

/// Quadratic operator B -> [[B; Sigma_1, ..., Sigma_M]] for the tensor group
/// lasso. Keeps T = [[B_k; Sigma]] for every class, updated by a rank-one
/// cross-profile whenever a single position changes.
class CatchKernel {
public:
    explicit CatchKernel(const KroneckerCov& cov);

    Scalar curvature(Index j) const { return curv_[j]; }
    Vector gradient_part(Index j) const { return t_.col(j); }
    void apply_change(Index j, const Vector& d);
    void reset(const Matrix& B);

private:
    void profile(Index j, Vector& out) const;

    const KroneckerCov& cov_;
    Dims dims_;
    Vector curv_;
    Matrix t_; // (K-1) x P
    Vector work_;
};

struct CatchOptions {
    Index dfmax = -1;
    SolverConfig solver;
};

struct CatchFit {
    Dims dims;
    ClassStats stats;
    KroneckerCov cov;
    std::vector<GroupPathPoint> points;
};

GroupResult catch_cd(const KroneckerCov& cov, const Matrix& delta, Scalar lambda, const SolverConfig& cfg, Matrix& B);

Scalar catch_lambda_max(const Matrix& x, const Labels& y, Index K);

CatchFit catch_fit(const Matrix& x, const Labels& y, Index K, const Dims& dims, const std::vector<Scalar>& lambdas,
                   const CatchOptions& opts = {});

/// Matrix-valued predictors; dims must have two modes.
CatchFit catch_matrix(const Matrix& x, const Labels& y, Index K, const Dims& dims,
                      const std::vector<Scalar>& lambdas, const CatchOptions& opts = {});

} // namespace sparda
