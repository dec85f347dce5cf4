#pragma once

#include "sparda/solver.hpp"
#include "sparda/stats.hpp"

#include <vector>

namespace sparda {

struct BinaryPoint {
    Scalar lambda = 0;       // on the method's own scale
    Scalar input_lambda = 0; // the value the caller asked for
    Vector beta;
    UnivariateLda postfit;
    bool converged = true;

    Index df() const { return (beta.array() != 0).count(); }
    DiscriminantRule rule() const { return binary_rule(beta, postfit); }
};

/// Ordered path for DSDA, ROAD or SOS. ROAD omits points whose DSDA
/// direction is null.
struct BinaryPath {
    Method method = Method::dsda;
    Vector priors;    // (pi_1, pi_2)
    Vector mean_diff; // mu_2 - mu_1
    std::vector<BinaryPoint> points;
};

/// Zero-mean response coding: -n/n1 for class 0, n/n2 for class 1.
Vector dsda_response(const Labels& y);

/// Smallest DSDA lambda giving beta = 0.
Scalar dsda_lambda_max(const Matrix& x, const Labels& y);

/// Lasso path on the coded response with warm starts, plus a 1-D LDA per point.
BinaryPath dsda_fit(const Matrix& x, const Labels& y, const std::vector<Scalar>& lambdas,
                    const SolverConfig& cfg = {});

/// DSDA directions rescaled so beta'(mu_2 - mu_1)/2 = 1; lambda becomes the
/// matching penalty of the constrained problem.
BinaryPath road_fit(const Matrix& x, const Labels& y, const std::vector<Scalar>& lambdas,
                    const SolverConfig& cfg = {});

/// beta_sos(lambda) = sqrt(pi1 pi2) beta_dsda(lambda / sqrt(pi1 pi2)).
BinaryPath sos_fit(const Matrix& x, const Labels& y, const std::vector<Scalar>& lambdas,
                   const SolverConfig& cfg = {});

/// sqrt(pi1 pi2) for a binary label vector.
Scalar sos_factor(const Labels& y);

/// Smallest lambda at which the SOS path is identically zero.
Scalar sos_lambda_max(const Matrix& x, const Labels& y);

} // namespace sparda
