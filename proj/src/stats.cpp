#include "sparda/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace sparda {

LabelMap::LabelMap(std::vector<int> codes) : codes_(std::move(codes))
{
    std::vector<int> sorted = codes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("LabelMap: duplicate label code");
}

LabelMap LabelMap::from_labels(std::span<const int> labels)
{
    std::vector<int> codes;
    for (int v : labels)
        if (std::find(codes.begin(), codes.end(), v) == codes.end()) codes.push_back(v);
    return LabelMap(std::move(codes));
}

Labels LabelMap::encode(std::span<const int> labels) const
{
    std::unordered_map<int, int> index;
    for (std::size_t k = 0; k < codes_.size(); ++k) index[codes_[k]] = static_cast<int>(k);
    Labels out(static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = index.find(labels[i]);
        if (it == index.end()) throw ConfigError("unknown class label " + std::to_string(labels[i]));
        out[static_cast<Index>(i)] = it->second;
    }
    return out;
}

Index count_classes(const Labels& y)
{
    return y.size() == 0 ? 0 : static_cast<Index>(y.maxCoeff()) + 1;
}

ClassStats estimate_stats(const Matrix& x, const Labels& y, Index K, bool with_pooled_cov)
{
    if (x.rows() != y.size()) throw DimensionError("estimate_stats: x has " + std::to_string(x.rows()) +
                                                   " rows but " + std::to_string(y.size()) + " labels");
    if (K < 1) throw EstimationError("estimate_stats: no classes");
    ClassStats s;
    s.K = K;
    s.counts = Eigen::VectorX<Index>::Zero(K);
    s.means = Matrix::Zero(K, x.cols());
    for (Index i = 0; i < x.rows(); ++i) {
        const Index k = y[i];
        if (k < 0 || k >= K) throw DimensionError("estimate_stats: label out of range");
        s.counts[k] += 1;
        s.means.row(k) += x.row(i);
    }
    for (Index k = 0; k < K; ++k) {
        if (s.counts[k] == 0) throw EstimationError("class " + std::to_string(k + 1) + " has no observations");
        s.means.row(k) /= static_cast<Scalar>(s.counts[k]);
    }
    const Scalar n = static_cast<Scalar>(x.rows());
    s.priors = s.counts.cast<Scalar>() / n;
    if (with_pooled_cov) {
        if (x.rows() <= K) throw EstimationError("pooled covariance needs n > K");
        const Matrix xc = within_class_centered(x, y, s.means);
        Matrix cov = Matrix::Zero(x.cols(), x.cols());
        cov.selfadjointView<Eigen::Lower>().rankUpdate(xc.transpose());
        cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
        s.pooled_cov = cov / (n - static_cast<Scalar>(K));
    }
    return s;
}

Matrix within_class_centered(const Matrix& x, const Labels& y, const Matrix& means)
{
    Matrix xc(x.rows(), x.cols());
    for (Index i = 0; i < x.rows(); ++i) xc.row(i) = x.row(i) - means.row(y[i]);
    return xc;
}

Matrix mean_differences(const ClassStats& stats)
{
    Matrix d(stats.K - 1, stats.means.cols());
    for (Index k = 1; k < stats.K; ++k) d.row(k - 1) = stats.means.row(k) - stats.means.row(0);
    return d;
}

Classification classify(const DiscriminantRule& rule, const Eigen::Ref<const Vector>& x, const Vector* u)
{
    if (x.size() != rule.num_features())
        throw DimensionError("classify: predictor has " + std::to_string(x.size()) + " entries, rule expects " +
                             std::to_string(rule.num_features()));
    Classification out;
    if (rule.covariates) {
        const CovariateTerm& c = *rule.covariates;
        if (!u) throw DimensionError("classify: rule needs covariates");
        if (u->size() != c.alpha.rows()) throw DimensionError("classify: covariate length mismatch");
        const Vector xa = x - c.alpha.transpose() * *u;
        out.scores = rule.intercept + rule.coef.transpose() * xa + c.gamma.transpose() * *u;
    } else {
        out.scores = rule.intercept + rule.coef.transpose() * x;
    }
    Index best = 0;
    for (Index k = 1; k < out.scores.size(); ++k)
        if (out.scores[k] > out.scores[best]) best = k;
    out.label = best;
    return out;
}

Labels classify_rows(const DiscriminantRule& rule, const Matrix& x, const Matrix* u)
{
    if (x.cols() != rule.num_features())
        throw DimensionError("classify: predictors have " + std::to_string(x.cols()) + " columns, rule expects " +
                             std::to_string(rule.num_features()));
    Matrix scores;
    if (rule.covariates) {
        const CovariateTerm& c = *rule.covariates;
        if (!u) throw DimensionError("classify: rule needs covariates");
        if (u->rows() != x.rows() || u->cols() != c.alpha.rows())
            throw DimensionError("classify: covariate matrix shape mismatch");
        const Matrix xa = x - *u * c.alpha;
        scores = xa * rule.coef + *u * c.gamma;
    } else {
        scores = x * rule.coef;
    }
    scores.rowwise() += rule.intercept.transpose();
    Labels out(x.rows());
    for (Index i = 0; i < x.rows(); ++i) {
        Index best = 0;
        for (Index k = 1; k < scores.cols(); ++k)
            if (scores(i, k) > scores(i, best)) best = k;
        out[i] = static_cast<int>(best);
    }
    return out;
}

DiscriminantRule lda_rule(const Matrix& coef, const ClassStats& stats)
{
    DiscriminantRule r;
    const Index K = stats.K;
    r.coef = Matrix::Zero(coef.rows(), K);
    r.coef.rightCols(K - 1) = coef;
    r.intercept = Vector::Zero(K);
    for (Index k = 1; k < K; ++k) {
        const Vector mid = 0.5 * (stats.means.row(k) + stats.means.row(0)).transpose();
        r.intercept[k] = std::log(stats.priors[k] / stats.priors[0]) - coef.col(k - 1).dot(mid);
    }
    return r;
}

UnivariateLda postfit_univariate(const Eigen::Ref<const Vector>& z, const Labels& y)
{
    if (z.size() != y.size()) throw DimensionError("postfit_univariate: length mismatch");
    UnivariateLda f;
    Index n1 = 0, n2 = 0;
    for (Index i = 0; i < z.size(); ++i) {
        if (y[i] == 0) {
            f.m1 += z[i];
            ++n1;
        } else {
            f.m2 += z[i];
            ++n2;
        }
    }
    if (n1 == 0 || n2 == 0) throw EstimationError("postfit_univariate: both classes must be present");
    f.m1 /= static_cast<Scalar>(n1);
    f.m2 /= static_cast<Scalar>(n2);
    const Index n = n1 + n2;
    for (Index i = 0; i < z.size(); ++i) {
        const Scalar d = z[i] - (y[i] == 0 ? f.m1 : f.m2);
        f.s2 += d * d;
    }
    f.s2 = n > 2 ? f.s2 / static_cast<Scalar>(n - 2) : 0.0;
    f.pi1 = static_cast<Scalar>(n1) / static_cast<Scalar>(n);
    f.pi2 = static_cast<Scalar>(n2) / static_cast<Scalar>(n);
    const Scalar log_odds = std::log(f.pi2 / f.pi1);
    const Scalar gap = f.m2 - f.m1;
    if (gap == 0.0) {
        // Null direction: the majority rule.
        f.slope = 0.0;
        f.offset = log_odds;
    } else if (!(f.s2 > 0.0)) {
        f.slope = gap > 0 ? 1.0 : -1.0;
        f.offset = -f.slope * 0.5 * (f.m1 + f.m2);
    } else {
        f.slope = gap / f.s2;
        f.offset = log_odds - gap * (f.m1 + f.m2) / (2.0 * f.s2);
    }
    return f;
}

DiscriminantRule binary_rule(const Vector& beta, const UnivariateLda& fit)
{
    DiscriminantRule r;
    r.coef = Matrix::Zero(beta.size(), 2);
    r.coef.col(1) = fit.slope * beta;
    r.intercept = Vector::Zero(2);
    r.intercept[1] = fit.offset;
    return r;
}

Scalar error_rate(const Labels& predicted, const Labels& truth)
{
    if (predicted.size() != truth.size()) throw DimensionError("error_rate: length mismatch");
    if (truth.size() == 0) return 0.0;
    return static_cast<Scalar>((predicted.array() != truth.array()).count()) / static_cast<Scalar>(truth.size());
}

} // namespace sparda
