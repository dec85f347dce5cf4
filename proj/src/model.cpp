#include "sparda/model.hpp"

#include "sparda/model_select.hpp"

#include <algorithm>

namespace sparda {

std::string to_string(Method m)
{
    switch (m) {
    case Method::dsda: return "dsda";
    case Method::road: return "road";
    case Method::sos: return "sos";
    case Method::sesda: return "sesda";
    case Method::msda: return "msda";
    case Method::catch_: return "catch";
    }
    return "?";
}

Method method_from_string(const std::string& s)
{
    for (Method m : {Method::dsda, Method::road, Method::sos, Method::sesda, Method::msda, Method::catch_})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown method '" + s + "' (expected dsda, road, sos, sesda, msda or catch)");
}

namespace {

bool is_binary_method(Method m)
{
    return m == Method::dsda || m == Method::road || m == Method::sos || m == Method::sesda;
}

} // namespace

Prepared prepare(const Dataset& data, const FitOptions& opts)
{
    data.validate();
    if (!data.has_labels()) throw ConfigError("training data has no labels");
    Prepared p;
    p.labels = LabelMap::from_labels(data.y);
    p.y = p.labels.encode(data.y);
    p.K = p.labels.size();
    if (p.K < 2) throw ConfigError("training data contains a single class");
    if (is_binary_method(opts.method) && p.K != 2)
        throw ConfigError(to_string(opts.method) + " needs exactly two classes, found " + std::to_string(p.K));
    if (opts.model_option && opts.method != Method::msda) throw ConfigError("model option applies to msda only");
    if (opts.method == Method::sesda && data.u) throw ConfigError("sesda does not take covariates");

    if (data.u) {
        AdjustedData adj = adjvec(data.x, *data.u, p.y, p.K);
        p.x = std::move(adj.x);
        p.adjustment = std::move(adj.adjustment);
    } else {
        p.x = data.x;
    }
    if (opts.method == Method::sesda) {
        p.transform = MonotoneTransform::fit(p.x, p.y, opts.sesda_variant);
        p.x = p.transform->apply(p.x);
    }
    return p;
}

Scalar lambda_max(const Prepared& prep, const Dataset& data, const FitOptions& opts)
{
    switch (opts.method) {
    case Method::dsda:
    case Method::road:
    case Method::sesda: return dsda_lambda_max(prep.x, prep.y);
    case Method::sos: return sos_lambda_max(prep.x, prep.y);
    case Method::msda: return msda_lambda_max(prep.x, prep.y, prep.K, opts.model_option);
    case Method::catch_:
        (void)data;
        return catch_lambda_max(prep.x, prep.y, prep.K);
    }
    return 0;
}

namespace {

void append_binary(FittedModel& m, const BinaryPath& path)
{
    for (const BinaryPoint& bp : path.points) {
        PathEntry e;
        e.lambda = bp.lambda;
        e.input_lambda = bp.input_lambda;
        e.df = bp.df();
        e.converged = bp.converged;
        e.coef = bp.beta;
        e.rule = bp.rule();
        m.path.push_back(std::move(e));
    }
}

void append_group(FittedModel& m, const std::vector<GroupPathPoint>& points)
{
    for (const GroupPathPoint& gp : points) {
        PathEntry e;
        e.lambda = gp.lambda;
        e.input_lambda = gp.lambda;
        e.df = gp.df;
        e.converged = gp.converged;
        e.coef = gp.coef;
        e.rule = gp.rule;
        m.path.push_back(std::move(e));
    }
}

} // namespace

FittedModel fit(const Dataset& data, const FitOptions& opts)
{
    Prepared prep = prepare(data, opts);
    FittedModel m;
    m.method = opts.method;
    m.labels = prep.labels;
    m.dims = data.dims;

    std::vector<Scalar> lambdas = opts.lambdas;
    if (lambdas.empty()) {
        const LambdaGrid grid =
            make_grid(lambda_max(prep, data, opts), opts.nlambda, opts.lambda_min_ratio, opts.log_spacing);
        if (!grid.warning.empty()) m.warnings.push_back(grid.warning);
        lambdas = grid.values;
    }
    for (Scalar l : lambdas)
        if (!(l >= 0)) throw ConfigError("lambda values must be non-negative");

    const ClassStats stats = estimate_stats(prep.x, prep.y, prep.K);
    m.priors = stats.priors;
    m.means = stats.means;

    switch (opts.method) {
    case Method::dsda:
    case Method::sesda: append_binary(m, dsda_fit(prep.x, prep.y, lambdas, opts.solver)); break;
    case Method::road: append_binary(m, road_fit(prep.x, prep.y, lambdas, opts.solver)); break;
    case Method::sos: append_binary(m, sos_fit(prep.x, prep.y, lambdas, opts.solver)); break;
    case Method::msda: {
        MsdaOptions mo;
        mo.dfmax = opts.dfmax;
        mo.model_option = opts.model_option;
        mo.solver = opts.solver;
        const MsdaFit f = msda_fit(prep.x, prep.y, prep.K, lambdas, mo);
        m.model_option = f.option;
        append_group(m, f.points);
        break;
    }
    case Method::catch_: {
        CatchOptions co;
        co.dfmax = opts.dfmax;
        co.solver = opts.solver;
        append_group(m, catch_fit(prep.x, prep.y, prep.K, data.dims, lambdas, co).points);
        break;
    }
    }
    if (opts.dfmax >= 0 && opts.method != Method::msda && opts.method != Method::catch_) {
        auto it = std::find_if(m.path.begin(), m.path.end(), [&](const PathEntry& e) { return e.df > opts.dfmax; });
        m.path.erase(it, m.path.end());
    }

    if (prep.adjustment) {
        for (PathEntry& e : m.path) e.rule = prep.adjustment->extend(e.rule);
        m.adjustment = std::move(prep.adjustment);
    }
    m.transform = std::move(prep.transform);
    for (const PathEntry& e : m.path)
        if (!e.converged) {
            m.warnings.push_back("solver hit the sweep limit at lambda " + std::to_string(e.lambda));
            break;
        }
    return m;
}

LabelMatrix predict(const FittedModel& model, const Matrix& x, const Matrix* u)
{
    if (x.cols() != model.num_features())
        throw DimensionError("model expects " + std::to_string(model.num_features()) + " predictor columns, got " +
                             std::to_string(x.cols()));
    if (model.adjustment && !u) throw DimensionError("model was fitted with covariates; supply them to predict");
    const Matrix* uu = model.adjustment ? u : nullptr;
    Matrix xt;
    const Matrix* xp = &x;
    if (model.transform) {
        xt = model.transform->apply(x);
        xp = &xt;
    }
    LabelMatrix out(x.rows(), static_cast<Index>(model.path.size()));
    for (std::size_t l = 0; l < model.path.size(); ++l) {
        const Labels lab = classify_rows(model.path[l].rule, *xp, uu);
        for (Index i = 0; i < x.rows(); ++i) out(i, static_cast<Index>(l)) = model.labels.decode(lab[i]);
    }
    return out;
}

std::vector<Scalar> path_errors(const FittedModel& model, const Dataset& data)
{
    if (!data.has_labels()) throw ConfigError("path_errors needs labelled data");
    const LabelMatrix pred = predict(model, data.x, data.u ? &*data.u : nullptr);
    std::vector<Scalar> err(static_cast<std::size_t>(pred.cols()), 0.0);
    for (Index l = 0; l < pred.cols(); ++l) {
        Index wrong = 0;
        for (Index i = 0; i < pred.rows(); ++i) wrong += pred(i, l) != data.y[static_cast<std::size_t>(i)];
        err[static_cast<std::size_t>(l)] = static_cast<Scalar>(wrong) / static_cast<Scalar>(pred.rows());
    }
    return err;
}

} // namespace sparda
