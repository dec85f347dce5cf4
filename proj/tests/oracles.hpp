#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the solvers under test.

#include "sparda/rng.hpp"
#include "sparda/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using sparda::Index;
using sparda::Matrix;
using sparda::Vector;

inline Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// G_M (x) ... (x) G_1.
inline Matrix kron_reverse(const std::vector<Matrix>& gs)
{
    Matrix out = gs.back();
    for (std::size_t m = gs.size() - 1; m-- > 0;) out = kron(out, gs[m]);
    return out;
}

inline Matrix random_matrix(sparda::Rng& rng, Index r, Index c)
{
    Matrix m(r, c);
    for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i) m(i, j) = rng.normal();
    return m;
}

inline sparda::Tensor random_tensor(sparda::Rng& rng, const sparda::Dims& dims)
{
    Vector v(sparda::dims_product(dims));
    for (Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
    return sparda::Tensor(dims, v);
}

/// Lasso objective with an unpenalised intercept, minimised over the
/// intercept in closed form.
inline double lasso_objective(const Matrix& x, const Vector& y, const Vector& beta, double lambda)
{
    const Vector r0 = y - x * beta;
    const Vector r = r0.array() - r0.mean();
    return r.squaredNorm() / static_cast<double>(x.rows()) + lambda * beta.lpNorm<1>();
}

/// Minimum of the lasso objective over a uniform grid on [lo, hi]^3.
inline double lasso_grid_min(const Matrix& x, const Vector& y, double lambda, int steps, double lo, double hi)
{
    double best = std::numeric_limits<double>::infinity();
    Vector b(3);
    for (int i = 0; i < steps; ++i)
        for (int j = 0; j < steps; ++j)
            for (int k = 0; k < steps; ++k) {
                const double h = (hi - lo) / (steps - 1);
                b << lo + i * h, lo + j * h, lo + k * h;
                best = std::min(best, lasso_objective(x, y, b, lambda));
            }
    return best;
}

/// Proximal gradient (ISTA) for
///   sum_k b_k' S b_k / 2 - d_k' b_k + lambda sum_j ||B(:, j)||,
/// B stored (K-1) x p. Slow but independent of the coordinate solvers.
inline Matrix group_lasso_prox(const Matrix& S, const Matrix& delta, double lambda, int iters = 200000,
                               double tol = 1e-14)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    const double L = es.eigenvalues().maxCoeff();
    Matrix B = Matrix::Zero(delta.rows(), delta.cols());
    for (int it = 0; it < iters; ++it) {
        const Matrix grad = B * S - delta;
        Matrix next = B - grad / L;
        for (Index j = 0; j < next.cols(); ++j) {
            const double nv = next.col(j).norm();
            const double t = lambda / L;
            next.col(j) = nv <= t ? Vector::Zero(next.rows()) : Vector(next.col(j) * (1.0 - t / nv));
        }
        const double change = (next - B).cwiseAbs().maxCoeff();
        B = next;
        if (change < tol) break;
    }
    return B;
}

/// Standard normal CDF.
inline double phi(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

} // namespace oracle
