#include "sparda/binary.hpp"

#include <cmath>
#include <limits>

namespace sparda {

namespace {

void check_binary(const Matrix& x, const Labels& y)
{
    if (x.rows() != y.size()) throw DimensionError("binary fit: x and y row counts differ");
    if (y.size() == 0) throw EstimationError("binary fit: empty dataset");
    if (y.minCoeff() < 0 || y.maxCoeff() > 1) throw ConfigError("binary methods need exactly two classes");
    const Index n2 = y.sum();
    if (n2 == 0 || n2 == y.size()) throw EstimationError("binary fit: both classes must be present");
}

} // namespace

Vector dsda_response(const Labels& y)
{
    const Scalar n = static_cast<Scalar>(y.size());
    const Scalar n2 = static_cast<Scalar>(y.sum());
    const Scalar n1 = n - n2;
    Vector r(y.size());
    for (Index i = 0; i < y.size(); ++i) r[i] = y[i] == 0 ? -n / n1 : n / n2;
    return r;
}

Scalar dsda_lambda_max(const Matrix& x, const Labels& y)
{
    check_binary(x, y);
    return LassoDesign<Scalar>(x, dsda_response(y)).lambda_max();
}

Scalar sos_factor(const Labels& y)
{
    const Scalar n = static_cast<Scalar>(y.size());
    const Scalar pi2 = static_cast<Scalar>(y.sum()) / n;
    return std::sqrt((1.0 - pi2) * pi2);
}

Scalar sos_lambda_max(const Matrix& x, const Labels& y)
{
    const Scalar f = sos_factor(y);
    const Scalar inner = dsda_lambda_max(x, y);
    Scalar lmax = f * inner;
    // The path divides by f again, so round up until that lands on inner.
    while (lmax / f < inner) lmax = std::nextafter(lmax, std::numeric_limits<Scalar>::infinity());
    return lmax;
}

BinaryPath dsda_fit(const Matrix& x, const Labels& y, const std::vector<Scalar>& lambdas, const SolverConfig& cfg)
{
    check_binary(x, y);
    const LassoDesign<Scalar> design(x, dsda_response(y));
    const ClassStats stats = estimate_stats(x, y, 2);

    BinaryPath path;
    path.method = Method::dsda;
    path.priors = stats.priors;
    path.mean_diff = (stats.means.row(1) - stats.means.row(0)).transpose();
    path.points.reserve(lambdas.size());

    Vector warm = Vector::Zero(x.cols());
    for (Scalar lambda : lambdas) {
        LassoResult<Scalar> res = design.solve(lambda, cfg, &warm);
        warm = res.beta;
        BinaryPoint pt;
        pt.lambda = lambda;
        pt.input_lambda = lambda;
        pt.converged = res.converged;
        pt.postfit = postfit_univariate(x * res.beta, y);
        pt.beta = std::move(res.beta);
        path.points.push_back(std::move(pt));
    }
    return path;
}

BinaryPath road_fit(const Matrix& x, const Labels& y, const std::vector<Scalar>& lambdas, const SolverConfig& cfg)
{
    BinaryPath dsda = dsda_fit(x, y, lambdas, cfg);
    const Scalar n = static_cast<Scalar>(y.size());
    BinaryPath path;
    path.method = Method::road;
    path.priors = dsda.priors;
    path.mean_diff = dsda.mean_diff;
    for (BinaryPoint& pt : dsda.points) {
        const Scalar proj = pt.beta.dot(dsda.mean_diff);
        if (!(proj > 0)) continue;
        const Scalar c = 2.0 / proj;
        // Stationarity of the DSDA fit rewritten with the pooled covariance
        // gives the constrained-problem penalty c * lambda * n / (n - 2).
        pt.lambda = c * pt.input_lambda * n / (n - 2.0);
        pt.beta *= c;
        pt.postfit = postfit_univariate(x * pt.beta, y);
        path.points.push_back(std::move(pt));
    }
    return path;
}

BinaryPath sos_fit(const Matrix& x, const Labels& y, const std::vector<Scalar>& lambdas, const SolverConfig& cfg)
{
    check_binary(x, y);
    const Scalar f = sos_factor(y);
    std::vector<Scalar> inner;
    inner.reserve(lambdas.size());
    for (Scalar l : lambdas) inner.push_back(l / f);
    BinaryPath path = dsda_fit(x, y, inner, cfg);
    path.method = Method::sos;
    for (std::size_t i = 0; i < path.points.size(); ++i) {
        BinaryPoint& pt = path.points[i];
        pt.lambda = lambdas[i];
        pt.input_lambda = lambdas[i];
        pt.beta *= f;
        pt.postfit = postfit_univariate(x * pt.beta, y);
    }
    return path;
}

} // namespace sparda
