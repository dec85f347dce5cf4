#pragma once

#include "sparda/types.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sparda {

/// Internal class indices are 0-based; index 0 plays the role of the
/// reference class (beta_1 = 0).
using Labels = Eigen::VectorXi;

/// Maps external integer labels to 0..K-1 by first appearance.
class LabelMap {
public:
    LabelMap() = default;
    explicit LabelMap(std::vector<int> codes);

    static LabelMap from_labels(std::span<const int> labels);

    Labels encode(std::span<const int> labels) const;
    int decode(Index k) const { return codes_.at(static_cast<std::size_t>(k)); }
    Index size() const { return static_cast<Index>(codes_.size()); }
    const std::vector<int>& codes() const { return codes_; }

private:
    std::vector<int> codes_;
};

struct ClassStats {
    Index K = 0;
    Eigen::VectorX<Index> counts;
    Vector priors;
    Matrix means; // K x P, one row per class
    std::optional<Matrix> pooled_cov;

    Index n() const { return counts.sum(); }
};

Index count_classes(const Labels& y);

ClassStats estimate_stats(const Matrix& x, const Labels& y, Index K, bool with_pooled_cov = false);

/// X with each row's class mean removed.
Matrix within_class_centered(const Matrix& x, const Labels& y, const Matrix& means);

/// Rows k = 1..K-1 hold mu_k - mu_0; shape (K-1) x P.
Matrix mean_differences(const ClassStats& stats);

/// The covariate part of a rule: score gains gamma_k' u and x is replaced by
/// x - alpha' u before the coefficient product.
struct CovariateTerm {
    Matrix alpha; // q x P
    Matrix gamma; // q x K, column 0 zero
};

/// score_k = intercept_k + gamma_k' u + coef_k' (x - alpha' u).
struct DiscriminantRule {
    Matrix coef;      // P x K, column 0 zero
    Vector intercept; // K, entry 0 zero
    std::shared_ptr<const CovariateTerm> covariates;

    Index num_classes() const { return coef.cols(); }
    Index num_features() const { return coef.rows(); }
};

struct Classification {
    Index label = 0;
    Vector scores;
};

Classification classify(const DiscriminantRule& rule, const Eigen::Ref<const Vector>& x,
                        const Vector* u = nullptr);

/// Row-wise classification; u may be null when the rule has no covariates.
Labels classify_rows(const DiscriminantRule& rule, const Matrix& x, const Matrix* u = nullptr);

/// Bayes rule for shared-covariance Gaussians given directions beta_k:
/// a_k = log(pi_k / pi_0) - beta_k'(mu_k + mu_0) / 2.
DiscriminantRule lda_rule(const Matrix& coef, const ClassStats& stats);

/// One-dimensional LDA on projections z_i = x_i' beta for a binary problem.
/// The induced rule is: class 1 iff slope * z + offset > 0.
struct UnivariateLda {
    Scalar m1 = 0, m2 = 0, s2 = 0;
    Scalar pi1 = 0, pi2 = 0;
    Scalar slope = 0, offset = 0;
};

UnivariateLda postfit_univariate(const Eigen::Ref<const Vector>& z, const Labels& y);

/// Binary rule from a direction and its post-fit 1-D LDA.
DiscriminantRule binary_rule(const Vector& beta, const UnivariateLda& fit);

Scalar error_rate(const Labels& predicted, const Labels& truth);

} // namespace sparda
