#pragma once

#include "sparda/catch.hpp"
#include "sparda/covadjust.hpp"
#include "sparda/dataset.hpp"
#include "sparda/msda.hpp"
#include "sparda/sesda.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sparda {

struct FitOptions {
    Method method = Method::dsda;
    std::vector<Scalar> lambdas; // empty: generate
    Index nlambda = 100;
    Scalar lambda_min_ratio = 0.05;
    bool log_spacing = false;
    Index dfmax = -1;
    std::optional<ModelOption> model_option;
    SesdaVariant sesda_variant = SesdaVariant::pooled;
    SolverConfig solver;
};

struct PathEntry {
    Scalar lambda = 0;       // method's own scale (ROAD reports the constrained-problem penalty)
    Scalar input_lambda = 0; // value handed to the fitter
    Index df = 0;
    bool converged = true;
    Matrix coef; // P x (K-1)
    DiscriminantRule rule;
};

struct FittedModel {
    Method method = Method::dsda;
    LabelMap labels;
    Dims dims;
    std::optional<ModelOption> model_option;
    std::optional<MonotoneTransform> transform;
    std::optional<Adjustment> adjustment;
    Vector priors;
    Matrix means; // K x P, on the scale the coefficients act on
    std::vector<PathEntry> path;
    std::vector<std::string> warnings;

    Index num_classes() const { return labels.size(); }
    Index num_features() const { return dims_product(dims); }
    Index num_covariates() const { return adjustment ? adjustment->num_covariates() : 0; }
};

/// Label encoding, covariate adjustment and the SeSDA transform: everything
/// that happens before a path is fitted.
struct Prepared {
    LabelMap labels;
    Labels y;
    Index K = 0;
    Matrix x;
    std::optional<Adjustment> adjustment;
    std::optional<MonotoneTransform> transform;
};

Prepared prepare(const Dataset& data, const FitOptions& opts);

/// Smallest penalty on the method's input scale with an all-zero fit.
Scalar lambda_max(const Prepared& prep, const Dataset& data, const FitOptions& opts);

FittedModel fit(const Dataset& data, const FitOptions& opts);

/// n x L matrix of predicted external labels, one column per path entry.
LabelMatrix predict(const FittedModel& model, const Matrix& x, const Matrix* u = nullptr);

/// Misclassification rate per path entry.
std::vector<Scalar> path_errors(const FittedModel& model, const Dataset& data);

} // namespace sparda
