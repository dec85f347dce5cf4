#include "sparda/msda.hpp"

#include <string>

namespace sparda {

std::string to_string(ModelOption o)
{
    switch (o) {
    case ModelOption::binary: return "binary";
    case ModelOption::multi_original: return "multi.original";
    case ModelOption::multi_modified: return "multi.modified";
    }
    return "?";
}

ModelOption model_option_from_string(const std::string& s)
{
    if (s == "binary") return ModelOption::binary;
    if (s == "multi.original") return ModelOption::multi_original;
    if (s == "multi.modified") return ModelOption::multi_modified;
    throw ConfigError("unknown model option '" + s + "' (expected binary, multi.original or multi.modified)");
}

ModelOption default_model_option(Index K, Index p)
{
    if (K == 2) return ModelOption::binary;
    return p <= 2000 ? ModelOption::multi_original : ModelOption::multi_modified;
}

MsdaOriginalKernel::MsdaOriginalKernel(const Matrix& sigma) : sigma_(sigma) {}

void MsdaOriginalKernel::apply_change(Index j, const Vector& d)
{
    g_.noalias() += d * sigma_.row(j);
}

void MsdaOriginalKernel::reset(const Matrix& B)
{
    g_ = B * sigma_;
}

MsdaModifiedKernel::MsdaModifiedKernel(const Matrix& xc, Index K)
    : xc_(xc), denom_(static_cast<Scalar>(xc.rows() - K))
{
    if (xc.rows() <= K) throw EstimationError("MSDA needs n > K");
    diag_ = xc.colwise().squaredNorm().transpose();
}

Vector MsdaModifiedKernel::gradient_part(Index j) const
{
    return resid_.transpose() * xc_.col(j) / denom_;
}

void MsdaModifiedKernel::apply_change(Index j, const Vector& d)
{
    resid_.noalias() += xc_.col(j) * d.transpose();
    b_.col(j) += d;
    const bool nz = !(b_.col(j).array() == 0).all();
    if (nz && !is_nonzero_[static_cast<std::size_t>(j)]) nonzero_.push_back(j);
    is_nonzero_[static_cast<std::size_t>(j)] = nz ? 1 : 0;
    if (!nz) std::erase(nonzero_, j);
}

void MsdaModifiedKernel::reset(const Matrix& B)
{
    b_ = B;
    resid_ = Matrix::Zero(xc_.rows(), B.rows());
    nonzero_.clear();
    is_nonzero_.assign(static_cast<std::size_t>(B.cols()), 0);
    for (Index j = 0; j < B.cols(); ++j) {
        if ((B.col(j).array() == 0).all()) continue;
        nonzero_.push_back(j);
        is_nonzero_[static_cast<std::size_t>(j)] = 1;
        resid_.noalias() += xc_.col(j) * B.col(j).transpose();
    }
}

std::vector<std::pair<Index, Index>> MsdaModifiedKernel::buffer_shapes() const
{
    return {{diag_.rows(), diag_.cols()},
            {resid_.rows(), resid_.cols()},
            {b_.rows(), b_.cols()},
            {static_cast<Index>(is_nonzero_.size()), 1},
            {static_cast<Index>(nonzero_.capacity()), 1}};
}

GroupResult msda_cd_original(const Matrix& sigma, const Matrix& delta, Scalar lambda, const SolverConfig& cfg,
                             Matrix& B)
{
    if (sigma.rows() != delta.cols() || sigma.cols() != delta.cols())
        throw DimensionError("msda: covariance and mean differences disagree on p");
    MsdaOriginalKernel kern(sigma);
    return group_cd(kern, delta, lambda, cfg, B);
}

GroupResult msda_cd_modified(const Matrix& xc, Index K, const Matrix& delta, Scalar lambda,
                             const SolverConfig& cfg, Matrix& B)
{
    if (xc.cols() != delta.cols()) throw DimensionError("msda: data and mean differences disagree on p");
    MsdaModifiedKernel kern(xc, K);
    return group_cd(kern, delta, lambda, cfg, B);
}

namespace {

void check_multiclass(const Matrix& x, const Labels& y, Index K)
{
    if (x.rows() != y.size()) throw DimensionError("msda: x and y row counts differ");
    if (K < 2) throw ConfigError("msda needs at least two classes");
    if (y.size() == 0 || y.minCoeff() < 0 || y.maxCoeff() >= K) throw DimensionError("msda: label out of range");
}

ModelOption resolve(const std::optional<ModelOption>& opt, Index K, Index p)
{
    const ModelOption o = opt.value_or(default_model_option(K, p));
    if (o == ModelOption::binary && K != 2)
        throw ConfigError("model option 'binary' is only valid for two-class problems");
    return o;
}

} // namespace

Scalar msda_lambda_max(const Matrix& x, const Labels& y, Index K, const std::optional<ModelOption>& option)
{
    check_multiclass(x, y, K);
    if (resolve(option, K, x.cols()) == ModelOption::binary) return dsda_lambda_max(x, y);
    return group_lambda_max(mean_differences(estimate_stats(x, y, K)));
}

MsdaFit msda_fit(const Matrix& x, const Labels& y, Index K, const std::vector<Scalar>& lambdas,
                 const MsdaOptions& opts)
{
    check_multiclass(x, y, K);
    MsdaFit fit;
    fit.option = resolve(opts.model_option, K, x.cols());
    const bool original = fit.option == ModelOption::multi_original;
    fit.stats = estimate_stats(x, y, K, original);

    if (fit.option == ModelOption::binary) {
        const BinaryPath path = dsda_fit(x, y, lambdas, opts.solver);
        for (const BinaryPoint& bp : path.points) {
            GroupPathPoint pt;
            pt.lambda = bp.lambda;
            pt.coef = bp.beta;
            pt.df = bp.df();
            if (opts.dfmax >= 0 && pt.df > opts.dfmax) break;
            pt.converged = bp.converged;
            pt.rule = bp.rule();
            fit.points.push_back(std::move(pt));
        }
        return fit;
    }

    const Matrix delta = mean_differences(fit.stats);
    Matrix xc;
    if (!original) xc = within_class_centered(x, y, fit.stats.means);
    Matrix B = Matrix::Zero(K - 1, x.cols());
    for (Scalar lambda : lambdas) {
        const GroupResult r = original ? msda_cd_original(*fit.stats.pooled_cov, delta, lambda, opts.solver, B)
                                       : msda_cd_modified(xc, K, delta, lambda, opts.solver, B);
        GroupPathPoint pt;
        pt.lambda = lambda;
        pt.df = group_df(B);
        if (opts.dfmax >= 0 && pt.df > opts.dfmax) break;
        pt.coef = B.transpose();
        pt.converged = r.converged;
        pt.sweeps = r.sweeps;
        pt.rule = lda_rule(pt.coef, fit.stats);
        fit.points.push_back(std::move(pt));
    }
    return fit;
}

} // namespace sparda
