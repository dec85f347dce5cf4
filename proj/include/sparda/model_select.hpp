#pragma once

#include "sparda/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sparda {

struct LambdaGrid {
    Scalar lambda_max = 0;
    Scalar lambda_min_ratio = 0.05;
    Index nlambda = 0;
    bool log_spacing = false;
    std::vector<Scalar> values; // decreasing, values[0] == lambda_max
    std::string warning;
};

/// nlambda values from lambda_max down to lambda_max * ratio, evenly spaced
/// (on the log scale when log_spacing is set).
LambdaGrid make_grid(Scalar lambda_max, Index nlambda, Scalar ratio, bool log_spacing = false);

LambdaGrid gen_lambda(const Dataset& data, const FitOptions& opts);

enum class CvRule { min, max };

std::string to_string(CvRule r);
CvRule cv_rule_from_string(const std::string& s);

struct CvOptions {
    Index nfolds = 5;
    CvRule rule = CvRule::min;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0: hardware concurrency
};

struct CvReport {
    std::vector<Scalar> lambdas;    // eligible grid values, decreasing
    std::vector<Scalar> mean_error; // aligned with lambdas
    Index nfolds = 0;
    std::uint64_t seed = 0;
    CvRule rule = CvRule::min;
    Scalar chosen_lambda = 0;
    Index chosen_index = 0;
    std::vector<Index> fold_of; // validation fold of every observation
};

/// Per class: shuffle, then deal round-robin across folds.
std::vector<Index> stratified_folds(const Labels& y, Index K, Index nfolds, std::uint64_t seed);

CvReport kfold_cv(const Dataset& data, const FitOptions& opts, const CvOptions& cv);

struct CvEvaluation {
    CvReport cv;
    FittedModel model; // refit on all training data at the chosen lambda
    Scalar test_error = 0;
};

/// Cross-validate on train, refit at the chosen lambda, score on test.
CvEvaluation cv_fit_evaluate(const Dataset& train, const Dataset& test, const FitOptions& opts,
                             const CvOptions& cv);

} // namespace sparda
