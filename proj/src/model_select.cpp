#include "sparda/model_select.hpp"

#include "sparda/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace sparda {

LambdaGrid make_grid(Scalar lambda_max, Index nlambda, Scalar ratio, bool log_spacing)
{
    if (nlambda < 1) throw ConfigError("nlambda must be at least 1");
    if (!(ratio > 0 && ratio < 1)) throw ConfigError("lambda_min_ratio must lie in (0, 1)");
    if (!(lambda_max >= 0) || !std::isfinite(lambda_max)) throw EstimationError("lambda_max is not finite");
    LambdaGrid g;
    g.lambda_max = lambda_max;
    g.lambda_min_ratio = ratio;
    g.log_spacing = log_spacing;
    if (lambda_max == 0) {
        g.nlambda = 1;
        g.values = {0.0};
        g.warning = "class means coincide; lambda grid collapsed to the single value 0";
        return g;
    }
    g.nlambda = nlambda;
    g.values.resize(static_cast<std::size_t>(nlambda));
    const Scalar lo = lambda_max * ratio;
    for (Index i = 0; i < nlambda; ++i) {
        const Scalar t = nlambda == 1 ? 0.0 : static_cast<Scalar>(i) / static_cast<Scalar>(nlambda - 1);
        g.values[static_cast<std::size_t>(i)] =
            log_spacing ? lambda_max * std::pow(ratio, t) : lambda_max - t * (lambda_max - lo);
    }
    g.values.front() = lambda_max;
    return g;
}

LambdaGrid gen_lambda(const Dataset& data, const FitOptions& opts)
{
    const Prepared prep = prepare(data, opts);
    return make_grid(lambda_max(prep, data, opts), opts.nlambda, opts.lambda_min_ratio, opts.log_spacing);
}

std::string to_string(CvRule r)
{
    return r == CvRule::min ? "min" : "max";
}

CvRule cv_rule_from_string(const std::string& s)
{
    if (s == "min") return CvRule::min;
    if (s == "max") return CvRule::max;
    throw ConfigError("unknown rule '" + s + "' (expected min or max)");
}

std::vector<Index> stratified_folds(const Labels& y, Index K, Index nfolds, std::uint64_t seed)
{
    if (nfolds < 2) throw ConfigError("nfolds must be at least 2");
    if (nfolds > y.size()) throw ConfigError("nfolds exceeds the number of observations");
    std::vector<std::vector<Index>> members(static_cast<std::size_t>(K));
    for (Index i = 0; i < y.size(); ++i) members[static_cast<std::size_t>(y[i])].push_back(i);
    Rng rng(seed);
    std::vector<Index> fold(static_cast<std::size_t>(y.size()), -1);
    Index next = 0;
    for (Index k = 0; k < K; ++k) {
        auto& m = members[static_cast<std::size_t>(k)];
        if (m.size() < 2)
            throw EstimationError("class " + std::to_string(k + 1) +
                                  " has fewer than two observations; some training split would miss it");
        for (std::size_t i = m.size() - 1; i > 0; --i) std::swap(m[i], m[rng.below(i + 1)]);
        for (Index i : m) fold[static_cast<std::size_t>(i)] = next++ % nfolds;
    }
    return fold;
}

namespace {

template <class F>
void parallel_for(Index count, unsigned threads, F&& body)
{
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<Index>(workers, count));
    if (workers <= 1) {
        for (Index i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<Index> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (Index i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

CvReport kfold_cv(const Dataset& data, const FitOptions& opts, const CvOptions& cv)
{
    data.validate();
    FitOptions fo = opts;
    if (fo.lambdas.empty()) fo.lambdas = gen_lambda(data, opts).values;
    const std::vector<Scalar>& grid = fo.lambdas;
    const Index L = static_cast<Index>(grid.size());

    const LabelMap labels = LabelMap::from_labels(data.y);
    const Labels y = labels.encode(data.y);
    CvReport rep;
    rep.nfolds = cv.nfolds;
    rep.seed = cv.seed;
    rep.rule = cv.rule;
    rep.fold_of = stratified_folds(y, labels.size(), cv.nfolds, cv.seed);

    // err(f, l) is NaN where fold f never reached grid point l.
    Matrix err = Matrix::Constant(cv.nfolds, L, std::numeric_limits<Scalar>::quiet_NaN());
    parallel_for(cv.nfolds, cv.threads, [&](Index f) {
        std::vector<Index> train, valid;
        for (Index i = 0; i < data.n(); ++i) (rep.fold_of[static_cast<std::size_t>(i)] == f ? valid : train).push_back(i);
        const Dataset tr = data.rows(train);
        const Dataset va = data.rows(valid);
        const FittedModel m = fit(tr, fo);
        const std::vector<Scalar> e = path_errors(m, va);
        Index pos = 0;
        for (std::size_t k = 0; k < m.path.size(); ++k) {
            while (pos < L && grid[static_cast<std::size_t>(pos)] != m.path[k].input_lambda) ++pos;
            if (pos == L) break;
            err(f, pos) = e[k];
        }
    });

    for (Index l = 0; l < L; ++l) {
        if (err.col(l).array().isNaN().any()) continue;
        rep.lambdas.push_back(grid[static_cast<std::size_t>(l)]);
        rep.mean_error.push_back(err.col(l).mean());
    }
    if (rep.lambdas.empty()) throw EstimationError("no lambda value was fitted in every fold");

    const Scalar best = *std::min_element(rep.mean_error.begin(), rep.mean_error.end());
    Index chosen = -1;
    for (std::size_t i = 0; i < rep.lambdas.size(); ++i) {
        if (rep.mean_error[i] > best + 1e-12) continue;
        const bool better = chosen < 0 || (cv.rule == CvRule::min
                                               ? rep.lambdas[i] < rep.lambdas[static_cast<std::size_t>(chosen)]
                                               : rep.lambdas[i] > rep.lambdas[static_cast<std::size_t>(chosen)]);
        if (better) chosen = static_cast<Index>(i);
    }
    rep.chosen_index = chosen;
    rep.chosen_lambda = rep.lambdas[static_cast<std::size_t>(chosen)];
    return rep;
}

CvEvaluation cv_fit_evaluate(const Dataset& train, const Dataset& test, const FitOptions& opts, const CvOptions& cv)
{
    CvEvaluation out;
    out.cv = kfold_cv(train, opts, cv);
    FitOptions fo = opts;
    fo.lambdas = {out.cv.chosen_lambda};
    out.model = fit(train, fo);
    if (out.model.path.empty()) throw EstimationError("refit at the chosen lambda produced no path point");
    out.test_error = path_errors(out.model, test).front();
    return out;
}

} // namespace sparda
