#pragma once

#include "sparda/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sparda {

struct SolverConfig {
    Index max_sweeps = 100000;
    Scalar tol = 1e-7;
    bool active_set = true;
    // When set, the objective after every sweep is appended here.
    std::vector<Scalar>* trace = nullptr;
};

inline void validate(const SolverConfig& cfg)
{
    if (cfg.max_sweeps < 1) throw ConfigError("max_sweeps must be at least 1");
    if (!(cfg.tol > 0)) throw ConfigError("tol must be positive");
}

template <class T>
T soft_threshold(T z, T t)
{
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return T(0);
}

/// Euclidean norm used by every group-lasso routine, so thresholds and
/// lambda_max agree to the last bit.
template <class Derived>
typename Derived::Scalar group_norm(const Eigen::MatrixBase<Derived>& v)
{
    return v.norm();
}

/// v * (1 - t/||v||)_+.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
group_soft_threshold(const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar t)
{
    using T = typename Derived::Scalar;
    using Out = Eigen::Matrix<T, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
    const T nv = group_norm(v);
    if (nv <= t || nv == T(0)) return Out::Zero(v.rows(), v.cols());
    return v * (T(1) - t / nv);
}

template <class T>
struct LassoResult {
    Eigen::VectorX<T> beta;
    T intercept = 0;
    Index sweeps = 0;
    bool converged = false;
};

/// Lasso least squares  (1/n)||y - b0 - X b||^2 + lambda ||b||_1  by cyclic
/// coordinate descent. Centering happens once at construction so a whole
/// lambda path reuses it.
template <class T>
class LassoDesign {
public:
    using MatrixT = Eigen::MatrixX<T>;
    using VectorT = Eigen::VectorX<T>;

    LassoDesign(const MatrixT& x, const VectorT& y)
    {
        if (x.rows() != y.size()) throw DimensionError("lasso: design and response lengths differ");
        if (x.rows() < 2) throw DimensionError("lasso: need at least two observations");
        n_ = x.rows();
        xmean_ = x.colwise().mean().transpose();
        ymean_ = y.mean();
        xc_ = x.rowwise() - xmean_.transpose();
        yc_ = y.array() - ymean_;
        scale_ = T(2) / static_cast<T>(n_);
        curv_.resize(xc_.cols());
        for (Index j = 0; j < xc_.cols(); ++j) curv_[j] = scale_ * xc_.col(j).squaredNorm();
    }

    Index rows() const { return n_; }
    Index cols() const { return xc_.cols(); }
    const MatrixT& centered_design() const { return xc_; }
    const VectorT& centered_response() const { return yc_; }

    /// Smallest lambda with an all-zero solution.
    T lambda_max() const
    {
        T best = 0;
        for (Index j = 0; j < xc_.cols(); ++j) best = std::max(best, std::abs(gradient(j, yc_)));
        return best;
    }

    T objective(const VectorT& beta, T lambda) const
    {
        return (yc_ - xc_ * beta).squaredNorm() / static_cast<T>(n_) + lambda * beta.template lpNorm<1>();
    }

    /// Largest violation of the lasso optimality conditions.
    T kkt_violation(const VectorT& beta, T lambda) const
    {
        const VectorT r = yc_ - xc_ * beta;
        return kkt_violation_from_residual(beta, lambda, r);
    }

    LassoResult<T> solve(T lambda, const SolverConfig& cfg = {}, const VectorT* warm = nullptr) const
    {
        validate(cfg);
        if (lambda < 0) throw ConfigError("lasso: lambda must be non-negative");
        const Index p = cols();
        LassoResult<T> res;
        res.beta = warm ? *warm : VectorT::Zero(p);
        if (res.beta.size() != p) throw DimensionError("lasso: warm start has wrong length");
        VectorT r = yc_ - xc_ * res.beta;

        std::vector<Index> active;
        auto rebuild_active = [&] {
            active.clear();
            for (Index j = 0; j < p; ++j)
                if (res.beta[j] != 0) active.push_back(j);
        };
        auto update = [&](Index j) {
            if (curv_[j] <= 0) {
                res.beta[j] = 0;
                return T(0);
            }
            const T old = res.beta[j];
            const T z = gradient(j, r) + curv_[j] * old;
            const T b = soft_threshold(z, lambda) / curv_[j];
            const T delta = b - old;
            if (delta != 0) {
                r.noalias() -= delta * xc_.col(j);
                res.beta[j] = b;
            }
            return std::abs(delta);
        };
        auto record = [&] {
            if (cfg.trace) cfg.trace->push_back(r.squaredNorm() / static_cast<T>(n_) +
                                                lambda * res.beta.template lpNorm<1>());
        };

        while (res.sweeps < cfg.max_sweeps) {
            T change = 0;
            for (Index j = 0; j < p; ++j) change = std::max(change, update(j));
            ++res.sweeps;
            record();
            if (change < cfg.tol) {
                if (kkt_violation_from_residual(res.beta, lambda, r) <= cfg.tol) {
                    res.converged = true;
                    break;
                }
                continue;
            }
            if (!cfg.active_set) continue;
            rebuild_active();
            while (res.sweeps < cfg.max_sweeps) {
                T inner = 0;
                for (Index j : active) inner = std::max(inner, update(j));
                ++res.sweeps;
                record();
                if (inner < cfg.tol) break;
            }
        }
        res.intercept = ymean_ - xmean_.dot(res.beta);
        return res;
    }

private:
    T gradient(Index j, const VectorT& r) const { return scale_ * xc_.col(j).dot(r); }

    T kkt_violation_from_residual(const VectorT& beta, T lambda, const VectorT& r) const
    {
        T worst = 0;
        for (Index j = 0; j < beta.size(); ++j) {
            const T g = gradient(j, r);
            const T v = beta[j] != 0 ? std::abs(g - lambda * (beta[j] > 0 ? T(1) : T(-1)))
                                     : std::max(T(0), std::abs(g) - lambda);
            worst = std::max(worst, v);
        }
        return worst;
    }

    Index n_ = 0;
    MatrixT xc_;
    VectorT yc_;
    VectorT xmean_;
    T ymean_ = 0;
    T scale_ = 0;
    VectorT curv_;
};

template <class T>
LassoResult<T> lasso_cd(const Eigen::MatrixX<T>& x, const Eigen::VectorX<T>& y, T lambda, const SolverConfig& cfg = {},
                        const Eigen::VectorX<T>* warm = nullptr)
{
    return LassoDesign<T>(x, y).solve(lambda, cfg, warm);
}

template <class Kernel>
Scalar group_objective(const Kernel& kern, const Matrix& delta, Scalar lambda, const Matrix& B);
template <class Kernel>
Scalar group_kkt_violation(const Kernel& kern, const Matrix& delta, Scalar lambda, const Matrix& B);

struct GroupResult {
    Index sweeps = 0;
    bool converged = false;
};

/// Blockwise coordinate descent for
///   sum_k { b_k' S b_k / 2 - d_k' b_k } + lambda sum_j ||B(:, j)||
/// with B stored (K-1) x P so each column is one group. The kernel owns the
/// quadratic operator S and must provide
///   curvature(j)         S_jj (groups with curvature <= 0 stay at zero)
///   gradient_part(j)     (B S)(:, j) for the current B
///   apply_change(j, d)   update its caches after B(:, j) += d
///   reset(B)             rebuild caches from scratch
template <class Kernel>
GroupResult group_cd(Kernel& kern, const Matrix& delta, Scalar lambda, const SolverConfig& cfg, Matrix& B)
{
    validate(cfg);
    if (lambda < 0) throw ConfigError("group lasso: lambda must be non-negative");
    if (B.rows() != delta.rows() || B.cols() != delta.cols()) throw DimensionError("group lasso: warm start shape");
    const Index P = delta.cols();
    kern.reset(B);
    GroupResult res;

    auto update = [&](Index j) -> Scalar {
        const Scalar c = kern.curvature(j);
        if (!(c > 0)) return 0.0;
        const Vector b = B.col(j);
        const Vector g = kern.gradient_part(j);
        const Vector r = delta.col(j) - (g - c * b);
        const Vector nb = group_soft_threshold(r, lambda) / c;
        const Vector d = nb - b;
        if ((d.array() == 0).all()) return 0.0;
        B.col(j) = nb;
        kern.apply_change(j, d);
        return d.cwiseAbs().maxCoeff();
    };
    auto record = [&] {
        if (cfg.trace) cfg.trace->push_back(group_objective(kern, delta, lambda, B));
    };

    std::vector<Index> active;
    while (res.sweeps < cfg.max_sweeps) {
        Scalar change = 0;
        for (Index j = 0; j < P; ++j) change = std::max(change, update(j));
        ++res.sweeps;
        record();
        if (change < cfg.tol) {
            if (group_kkt_violation(kern, delta, lambda, B) <= cfg.tol) {
                res.converged = true;
                break;
            }
            continue;
        }
        if (!cfg.active_set) continue;
        active.clear();
        for (Index j = 0; j < P; ++j)
            if (!(B.col(j).array() == 0).all()) active.push_back(j);
        while (res.sweeps < cfg.max_sweeps) {
            Scalar inner = 0;
            for (Index j : active) inner = std::max(inner, update(j));
            ++res.sweeps;
            record();
            if (inner < cfg.tol) break;
        }
    }
    return res;
}

template <class Kernel>
Scalar group_objective(const Kernel& kern, const Matrix& delta, Scalar lambda, const Matrix& B)
{
    Scalar obj = 0;
    for (Index j = 0; j < B.cols(); ++j) {
        if ((B.col(j).array() == 0).all()) continue;
        const Vector g = kern.gradient_part(j);
        obj += 0.5 * B.col(j).dot(g) - B.col(j).dot(delta.col(j)) + lambda * group_norm(B.col(j));
    }
    return obj;
}

/// Largest violation of the group-lasso optimality conditions, measured in
/// the Euclidean norm of each group's subgradient residual.
template <class Kernel>
Scalar group_kkt_violation(const Kernel& kern, const Matrix& delta, Scalar lambda, const Matrix& B)
{
    Scalar worst = 0;
    for (Index j = 0; j < B.cols(); ++j) {
        if (!(kern.curvature(j) > 0)) continue;
        const Vector g = kern.gradient_part(j) - delta.col(j);
        const Scalar nb = group_norm(B.col(j));
        const Scalar v = nb > 0 ? group_norm(g + lambda * B.col(j) / nb) : std::max(0.0, group_norm(g) - lambda);
        worst = std::max(worst, v);
    }
    return worst;
}

/// Number of nonzero groups (columns) of B.
inline Index group_df(const Matrix& B)
{
    Index df = 0;
    for (Index j = 0; j < B.cols(); ++j)
        if (!(B.col(j).array() == 0).all()) ++df;
    return df;
}

/// max_j ||delta(:, j)||, the smallest lambda with an all-zero solution.
inline Scalar group_lambda_max(const Matrix& delta)
{
    Scalar best = 0;
    for (Index j = 0; j < delta.cols(); ++j) best = std::max(best, group_norm(delta.col(j)));
    return best;
}

} // namespace sparda
