#include "sparda/catch.hpp"

#include <string>

namespace sparda {

Dims KroneckerCov::dims() const
{
    Dims d;
    for (const Matrix& s : sigma) d.push_back(s.rows());
    return d;
}

Matrix KroneckerCov::full() const
{
    Matrix out = Matrix::Ones(1, 1);
    for (const Matrix& s : sigma) {
        // kron(s, out): later modes vary slowest in vec order.
        Matrix next(out.rows() * s.rows(), out.cols() * s.cols());
        for (Index a = 0; a < s.rows(); ++a)
            for (Index b = 0; b < s.cols(); ++b)
                next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) = s(a, b) * out;
        out = std::move(next);
    }
    return out;
}

KroneckerCov estimate_kron_cov(const Matrix& x, const Labels& y, Index K, const Dims& dims)
{
    if (dims.empty()) throw DimensionError("estimate_kron_cov: empty dims");
    if (x.cols() != dims_product(dims))
        throw DimensionError("estimate_kron_cov: rows have " + std::to_string(x.cols()) + " entries, dims " +
                             dims_to_string(dims) + " need " + std::to_string(dims_product(dims)));
    const Index n = x.rows();
    if (n <= K) throw EstimationError("estimate_kron_cov: need n > K");
    const ClassStats stats = estimate_stats(x, y, K);
    const Matrix resid = within_class_centered(x, y, stats.means);

    // The residuals stacked as one (M+1)-way tensor with observations last;
    // its mode-j unfolding concatenates every W_i(j).
    Dims big = dims;
    big.push_back(n);
    const Tensor all(big, Eigen::Map<const Vector>(Matrix(resid.transpose()).data(), resid.size()));

    const Index M = static_cast<Index>(dims.size());
    const Index P = x.cols();
    KroneckerCov cov;
    std::vector<Scalar> s11(static_cast<std::size_t>(M));
    for (Index j = 0; j < M; ++j) {
        const Matrix w = unfold(all, j);
        Matrix s = Matrix::Zero(w.rows(), w.rows());
        s.selfadjointView<Eigen::Lower>().rankUpdate(w);
        s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
        s /= static_cast<Scalar>(n) * static_cast<Scalar>(P / dims[static_cast<std::size_t>(j)]);
        s11[static_cast<std::size_t>(j)] = s(0, 0);
        if (!(s(0, 0) > 0)) throw EstimationError("estimate_kron_cov: leading entry has zero variance");
        cov.sigma.push_back(std::move(s));
    }
    // The last factor carries the scale: the (1,...,1) entry of the
    // Kronecker product equals the pooled variance of that entry.
    const Scalar var11 = resid.col(0).squaredNorm() / static_cast<Scalar>(n - K);
    for (Index j = 0; j + 1 < M; ++j) {
        Matrix& s = cov.sigma[static_cast<std::size_t>(j)];
        s /= s11[static_cast<std::size_t>(j)];
        s(0, 0) = 1.0;
    }
    cov.sigma.back() *= var11 / s11.back();
    return cov;
}

CatchKernel::CatchKernel(const KroneckerCov& cov) : cov_(cov), dims_(cov.dims())
{
    const Index P = dims_product(dims_);
    curv_.resize(P);
    for (Index l = 0; l < P; ++l) {
        const Dims idx = multi_index(dims_, l);
        Scalar c = 1;
        for (std::size_t m = 0; m < idx.size(); ++m) c *= cov_.sigma[m](idx[m], idx[m]);
        curv_[l] = c;
    }
    work_.resize(P);
}

void CatchKernel::profile(Index j, Vector& out) const
{
    // vec of the outer product of column j_m of every Sigma_m.
    const Dims idx = multi_index(dims_, j);
    Index len = 1;
    out[0] = 1.0;
    for (std::size_t m = 0; m < idx.size(); ++m) {
        const auto col = cov_.sigma[m].col(idx[m]);
        const Index pm = col.size();
        for (Index a = pm - 1; a >= 0; --a) out.segment(a * len, len) = col[a] * out.head(len);
        len *= pm;
    }
}

void CatchKernel::apply_change(Index j, const Vector& d)
{
    profile(j, work_);
    t_.noalias() += d * work_.transpose();
}

void CatchKernel::reset(const Matrix& B)
{
    t_ = Matrix::Zero(B.rows(), B.cols());
    for (Index k = 0; k < B.rows(); ++k) {
        if ((B.row(k).array() == 0).all()) continue;
        const Tensor bk(dims_, B.row(k).transpose());
        t_.row(k) = tucker_transform(bk, cov_.sigma).vec().transpose();
    }
}

GroupResult catch_cd(const KroneckerCov& cov, const Matrix& delta, Scalar lambda, const SolverConfig& cfg, Matrix& B)
{
    if (delta.cols() != dims_product(cov.dims())) throw DimensionError("catch: dims disagree with mean differences");
    CatchKernel kern(cov);
    return group_cd(kern, delta, lambda, cfg, B);
}

namespace {

void check_tensor_data(const Matrix& x, const Labels& y, Index K, const Dims& dims)
{
    if (x.rows() != y.size()) throw DimensionError("catch: x and y row counts differ");
    if (K < 2) throw ConfigError("catch needs at least two classes");
    if (y.size() == 0 || y.minCoeff() < 0 || y.maxCoeff() >= K) throw DimensionError("catch: label out of range");
    if (x.cols() != dims_product(dims)) throw DimensionError("catch: row length does not match dims " +
                                                             dims_to_string(dims));
}

} // namespace

Scalar catch_lambda_max(const Matrix& x, const Labels& y, Index K)
{
    return group_lambda_max(mean_differences(estimate_stats(x, y, K)));
}

CatchFit catch_fit(const Matrix& x, const Labels& y, Index K, const Dims& dims, const std::vector<Scalar>& lambdas,
                   const CatchOptions& opts)
{
    check_tensor_data(x, y, K, dims);
    CatchFit fit;
    fit.dims = dims;
    fit.stats = estimate_stats(x, y, K);
    fit.cov = estimate_kron_cov(x, y, K, dims);
    const Matrix delta = mean_differences(fit.stats);
    Matrix B = Matrix::Zero(K - 1, x.cols());
    for (Scalar lambda : lambdas) {
        const GroupResult r = catch_cd(fit.cov, delta, lambda, opts.solver, B);
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

CatchFit catch_matrix(const Matrix& x, const Labels& y, Index K, const Dims& dims,
                      const std::vector<Scalar>& lambdas, const CatchOptions& opts)
{
    if (dims.size() != 2) throw DimensionError("catch_matrix expects 2-way predictors, got " +
                                               std::to_string(dims.size()) + " modes");
    return catch_fit(x, y, K, dims, lambdas, opts);
}

} // namespace sparda
