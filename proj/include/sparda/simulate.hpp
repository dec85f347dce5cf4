#pragma once

#include "sparda/dataset.hpp"

#include <cstdint>

namespace sparda {

struct SimPair {
    Dataset train;
    Dataset test;
};

/// Two Gaussian classes with compound-symmetry covariance; mu_1 = 0 and
/// mu_2 = Sigma beta with beta_j = beta_value for the first n_signal entries.
struct VectorSimSpec {
    Index p = 500;
    Index n_per_class = 75;
    Index n_test = 1000;
    Scalar rho = 0.3;
    Scalar beta_value = 0.5;
    Index n_signal = 10;
    std::uint64_t seed = 123456;
};

/// Training labels are 1..1, 2..2 in blocks; test labels are ceil(2 u).
SimPair sim_binary_vector(const VectorSimSpec& spec);

/// Tensor normal classes with identity mode covariances and covariates:
/// X = mu_y + [[Z + alpha x_{M+1} u; L_1..L_M]], u | y ~ N(phi_y, I).
struct TensorSimSpec {
    Dims dims{10, 10, 10};
    Index q = 2;
    Index n_per_class = 75;
    Index n_test = 1000;
    Scalar b_value = 0.8;
    Index b_extent = 2;     // B nonzero on the leading b_extent^M block
    Scalar phi_shift = 0.3; // class-2 covariate mean in every coordinate
    Scalar alpha_value = 1.0;
    Index alpha_extent = 5; // alpha(., 1) nonzero on the leading alpha_extent^M block
    std::uint64_t seed = 123456;
};

SimPair sim_tensor_cov(const TensorSimSpec& spec);

/// Bayes error of the vector simulator: Phi(-sqrt(beta' Sigma beta) / 2).
Scalar vector_sim_bayes_error(const VectorSimSpec& spec);

} // namespace sparda
