#pragma once

#include "sparda/binary.hpp"
#include "sparda/solver.hpp"
#include "sparda/stats.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sparda {

enum class ModelOption { binary, multi_original, multi_modified };

std::string to_string(ModelOption o);
ModelOption model_option_from_string(const std::string& s);

/// binary for K = 2, otherwise the full-covariance solver up to p = 2000.
ModelOption default_model_option(Index K, Index p);

/// One point of a multiclass path. coef is P x (K-1).
struct GroupPathPoint {
    Scalar lambda = 0;
    Matrix coef;
    Index df = 0;
    bool converged = true;
    Index sweeps = 0;
    DiscriminantRule rule;
};

/// Quadratic operator given by an explicit pooled covariance.
class MsdaOriginalKernel {
public:
    explicit MsdaOriginalKernel(const Matrix& sigma);

    Scalar curvature(Index j) const { return sigma_(j, j); }
    Vector gradient_part(Index j) const { return g_.col(j); }
    void apply_change(Index j, const Vector& d);
    void reset(const Matrix& B);

private:
    const Matrix& sigma_;
    Matrix g_; // B * Sigma, (K-1) x p
};

/// Same operator applied through the within-class-centred data, so no p x p
/// matrix is ever formed. Keeps the residual R = Xc B' (n x (K-1)), the
/// cached column sums of squares and the set of nonzero groups.
class MsdaModifiedKernel {
public:
    MsdaModifiedKernel(const Matrix& xc, Index K);

    Scalar curvature(Index j) const { return diag_[j] / denom_; }
    Vector gradient_part(Index j) const;
    void apply_change(Index j, const Vector& d);
    void reset(const Matrix& B);

    const std::vector<Index>& nonzero() const { return nonzero_; }
    /// Shapes of every buffer the kernel owns, for memory accounting.
    std::vector<std::pair<Index, Index>> buffer_shapes() const;

private:
    const Matrix& xc_;
    Scalar denom_;
    Vector diag_;
    Matrix resid_;
    std::vector<Index> nonzero_;
    std::vector<char> is_nonzero_;
    Matrix b_; // current coefficients, (K-1) x p
};

/// cd_original / cd_modified: solve one lambda from a warm start. delta is
/// (K-1) x p (row k-1 is mu_k - mu_0), B has the same shape.
GroupResult msda_cd_original(const Matrix& sigma, const Matrix& delta, Scalar lambda, const SolverConfig& cfg,
                             Matrix& B);
GroupResult msda_cd_modified(const Matrix& xc, Index K, const Matrix& delta, Scalar lambda,
                             const SolverConfig& cfg, Matrix& B);

struct MsdaOptions {
    Index dfmax = -1; // negative means no limit
    std::optional<ModelOption> model_option;
    SolverConfig solver;
};

struct MsdaFit {
    ModelOption option = ModelOption::multi_original;
    ClassStats stats;
    std::vector<GroupPathPoint> points;
};

Scalar msda_lambda_max(const Matrix& x, const Labels& y, Index K, const std::optional<ModelOption>& option = {});

MsdaFit msda_fit(const Matrix& x, const Labels& y, Index K, const std::vector<Scalar>& lambdas,
                 const MsdaOptions& opts = {});

} // namespace sparda
