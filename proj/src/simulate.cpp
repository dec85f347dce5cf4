#include "sparda/simulate.hpp"

#include "sparda/rng.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace sparda {

namespace {

Matrix normal_matrix(Rng& rng, Index rows, Index cols)
{
    Matrix z(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) z(i, j) = rng.normal();
    return z;
}

std::vector<int> test_labels(Rng& rng, Index n)
{
    std::vector<int> y(static_cast<std::size_t>(n));
    for (auto& v : y) v = static_cast<int>(std::ceil(rng.uniform() * 2.0));
    // uniform() can return exactly 0, whose ceiling is not a class.
    for (auto& v : y)
        if (v < 1) v = 1;
    return y;
}

std::vector<int> block_labels(Index n_per_class)
{
    std::vector<int> y(static_cast<std::size_t>(2 * n_per_class), 1);
    std::fill(y.begin() + n_per_class, y.end(), 2);
    return y;
}

bool in_leading_block(const Dims& idx, Index extent)
{
    for (Index i : idx)
        if (i >= extent) return false;
    return true;
}

} // namespace

SimPair sim_binary_vector(const VectorSimSpec& spec)
{
    const Index p = spec.p;
    Matrix sigma = Matrix::Constant(p, p, spec.rho);
    sigma.diagonal().setOnes();
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) throw FactorizationError("simulator covariance is not positive definite");
    const Matrix lt = llt.matrixL().transpose();
    Vector beta = Vector::Zero(p);
    beta.head(std::min(spec.n_signal, p)).setConstant(spec.beta_value);
    const RowVector mu2 = (sigma * beta).transpose();

    Rng rng(spec.seed);
    SimPair out;
    out.test.y = test_labels(rng, spec.n_test);
    out.train.y = block_labels(spec.n_per_class);
    out.train.x = normal_matrix(rng, 2 * spec.n_per_class, p) * lt;
    out.test.x = normal_matrix(rng, spec.n_test, p) * lt;
    for (Dataset* d : {&out.train, &out.test}) {
        d->dims = {p};
        for (Index i = 0; i < d->x.rows(); ++i)
            if (d->y[static_cast<std::size_t>(i)] == 2) d->x.row(i) += mu2;
    }
    return out;
}

Scalar vector_sim_bayes_error(const VectorSimSpec& spec)
{
    const Scalar s = static_cast<Scalar>(std::min(spec.n_signal, spec.p));
    // beta' Sigma beta for compound symmetry restricted to the signal block.
    const Scalar q = spec.beta_value * spec.beta_value * (s + spec.rho * s * (s - 1.0));
    return 0.5 * std::erfc(0.5 * std::sqrt(q) / std::sqrt(2.0));
}

SimPair sim_tensor_cov(const TensorSimSpec& spec)
{
    const Dims& dims = spec.dims;
    const Index P = dims_product(dims);
    const Index q = spec.q;

    Vector b(P), alpha1(P);
    for (Index l = 0; l < P; ++l) {
        const Dims idx = multi_index(dims, l);
        b[l] = in_leading_block(idx, spec.b_extent) ? spec.b_value : 0.0;
        alpha1[l] = in_leading_block(idx, spec.alpha_extent) ? spec.alpha_value : 0.0;
    }
    // Identity mode covariances: mu_2 = [[B; Sigma]] = B and the Cholesky
    // factors are identities, so the Tucker step is the identity map.
    const Vector mu2 = b;

    Rng rng(spec.seed);
    SimPair out;
    out.test.y = test_labels(rng, spec.n_test);
    out.train.y = block_labels(spec.n_per_class);
    const Index n = 2 * spec.n_per_class;
    out.train.u = normal_matrix(rng, n, q);
    out.test.u = normal_matrix(rng, spec.n_test, q);
    for (Dataset* d : {&out.train, &out.test}) {
        for (Index i = 0; i < d->u->rows(); ++i)
            if (d->y[static_cast<std::size_t>(i)] == 2) d->u->row(i).array() += spec.phi_shift;
    }
    out.train.x = normal_matrix(rng, n, P);
    out.test.x = normal_matrix(rng, spec.n_test, P);
    for (Dataset* d : {&out.train, &out.test}) {
        d->dims = dims;
        if (q > 0) d->x.noalias() += d->u->col(0) * alpha1.transpose();
        for (Index i = 0; i < d->x.rows(); ++i)
            if (d->y[static_cast<std::size_t>(i)] == 2) d->x.row(i) += mu2.transpose();
    }
    return out;
}

} // namespace sparda
