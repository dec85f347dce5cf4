#include "../oracles.hpp"

#include "sparda/covadjust.hpp"
#include "sparda/model.hpp"

#include <doctest.h>

using namespace sparda;

namespace {

Labels alternating(Index n, Index K)
{
    Labels y(n);
    for (Index i = 0; i < n; ++i) y[i] = static_cast<int>(i % K);
    return y;
}

Matrix centred(const Matrix& m, const Labels& y, Index K)
{
    return within_class_centered(m, y, estimate_stats(m, y, K).means);
}

} // namespace

TEST_CASE("noiseless predictors recover the loadings")
{
    Rng rng(1);
    const Labels y = alternating(30, 3);
    const Matrix u = oracle::random_matrix(rng, 30, 2);
    const Matrix alpha = oracle::random_matrix(rng, 2, 7);
    Matrix x = u * alpha;
    for (Index i = 0; i < 30; ++i) x.row(i).array() += 2.0 * y[i]; // class shifts drop out
    const AdjustedData a = adjvec(x, u, y, 3);
    CHECK((a.adjustment.alpha - alpha).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(centred(a.x, y, 3).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("adjusted predictors are orthogonal to the centred covariates")
{
    Rng rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const Labels y = alternating(50, 2 + rep % 3);
        const Index K = 2 + rep % 3;
        const Matrix u = oracle::random_matrix(rng, 50, 3);
        const Matrix x = oracle::random_matrix(rng, 50, 9) + u * oracle::random_matrix(rng, 3, 9);
        const AdjustedData a = adjvec(x, u, y, K);
        CHECK((centred(u, y, K).transpose() * centred(a.x, y, K)).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((a.adjustment.apply(x, u) - a.x).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("two covariates and one predictor by hand")
{
    Rng rng(3);
    const Labels y = alternating(12, 2);
    const Matrix u = oracle::random_matrix(rng, 12, 2);
    const Matrix x = oracle::random_matrix(rng, 12, 1);
    const Matrix ut = centred(u, y, 2), xt = centred(x, y, 2);
    const double a = ut.col(0).squaredNorm(), b = ut.col(0).dot(ut.col(1)), d = ut.col(1).squaredNorm();
    const double r0 = ut.col(0).dot(xt.col(0)), r1 = ut.col(1).dot(xt.col(0));
    const double det = a * d - b * b;
    const AdjustedData adj = adjvec(x, u, y, 2);
    CHECK(adj.adjustment.alpha(0, 0) == doctest::Approx((d * r0 - b * r1) / det).epsilon(1e-12));
    CHECK(adj.adjustment.alpha(1, 0) == doctest::Approx((a * r1 - b * r0) / det).epsilon(1e-12));

    // Psi uses n - K, gamma_k = Psi^{-1}(phi_k - phi_0).
    Matrix psi(2, 2);
    psi << a, b, b, d;
    psi /= 10.0;
    CHECK((adj.adjustment.psi - psi).cwiseAbs().maxCoeff() < 1e-12);
    const Vector diff = (adj.adjustment.phi.row(1) - adj.adjustment.phi.row(0)).transpose();
    CHECK((adj.adjustment.gamma.col(1) - psi.inverse() * diff).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(adj.adjustment.gamma.col(0).isZero(0));
}

TEST_CASE("rule extension adds the covariate terms")
{
    Rng rng(4);
    const Labels y = alternating(40, 3);
    const Matrix u = oracle::random_matrix(rng, 40, 2);
    const Matrix x = oracle::random_matrix(rng, 40, 4);
    const Adjustment adj = adjvec(x, u, y, 3).adjustment;
    DiscriminantRule base;
    base.coef = oracle::random_matrix(rng, 4, 3);
    base.coef.col(0).setZero();
    base.intercept = Vector::Zero(3);
    const DiscriminantRule r = adj.extend(base);
    const Vector xi = oracle::random_matrix(rng, 4, 1), ui = oracle::random_matrix(rng, 2, 1);
    const Classification c = classify(r, xi, &ui);
    for (Index k = 0; k < 3; ++k) {
        const Vector g = adj.gamma.col(k);
        const double shift = -0.5 * g.dot((adj.phi.row(k) + adj.phi.row(0)).transpose());
        const double expected =
            shift + g.dot(ui) + base.coef.col(k).dot(xi - adj.alpha.transpose() * ui);
        CHECK(c.scores[k] == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_THROWS(classify(r, xi));
}

TEST_CASE("tensor adjustment matches the vectorised adjustment")
{
    Rng rng(5);
    const Dims dims{3, 2, 2};
    const Labels y = alternating(40, 2);
    const Matrix u = oracle::random_matrix(rng, 40, 2);
    std::vector<Tensor> xs;
    Matrix flat(40, 12);
    for (Index i = 0; i < 40; ++i) {
        xs.push_back(oracle::random_tensor(rng, dims));
        flat.row(i) = xs.back().vec().transpose();
    }
    const AdjustedTensors t = adjten(xs, u, y, 2);
    const AdjustedData v = adjvec(flat, u, y, 2);
    CHECK(t.adjustment.alpha == v.adjustment.alpha);
    for (Index i = 0; i < 40; ++i) CHECK(t.x[static_cast<std::size_t>(i)].vec() == v.x.row(i).transpose());
    CHECK(t.alpha_tensor(1, dims).vec() == v.adjustment.alpha.row(1).transpose());
}

TEST_CASE("noiseless tensor covariate effect is recovered exactly")
{
    // alpha(., 0) = 1 on the leading 2x2x2 block, alpha(., 1) = 0.
    Rng rng(6);
    const Dims dims{4, 4, 4};
    Vector a0 = Vector::Zero(64);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j)
            for (Index k = 0; k < 2; ++k) a0[linear_index(dims, std::vector<Index>{i, j, k})] = 1.0;
    const Labels y = alternating(30, 2);
    const Matrix u = oracle::random_matrix(rng, 30, 2);
    std::vector<Tensor> xs;
    for (Index i = 0; i < 30; ++i) xs.push_back(Tensor(dims, Vector::Constant(64, y[i] * 0.5) + u(i, 0) * a0));
    const AdjustedTensors t = adjten(xs, u, y, 2);
    CHECK((t.adjustment.alpha.row(0).transpose() - a0).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(t.adjustment.alpha.row(1).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("degenerate covariates are rejected")
{
    Rng rng(7);
    const Labels y = alternating(20, 2);
    Matrix u = oracle::random_matrix(rng, 20, 2);
    u.col(1).setZero();
    CHECK_THROWS_AS(adjvec(oracle::random_matrix(rng, 20, 3), u, y, 2), EstimationError);
    Matrix collinear = oracle::random_matrix(rng, 20, 2);
    collinear.col(1) = 2.0 * collinear.col(0);
    CHECK_THROWS_AS(adjvec(oracle::random_matrix(rng, 20, 3), collinear, y, 2), EstimationError);
    CHECK_THROWS_AS(adjvec(oracle::random_matrix(rng, 4, 3), oracle::random_matrix(rng, 4, 2), alternating(4, 2), 2),
                    EstimationError);
    CHECK_THROWS_AS(adjvec(oracle::random_matrix(rng, 20, 3), oracle::random_matrix(rng, 19, 2), y, 2),
                    DimensionError);
}

TEST_CASE("covariate-aware fit equals a fit on adjusted data plus the covariate rule")
{
    Rng rng(8);
    Dataset d;
    d.dims = {6};
    d.x = oracle::random_matrix(rng, 60, 6);
    d.u = oracle::random_matrix(rng, 60, 2);
    for (Index i = 0; i < 60; ++i) {
        d.y.push_back(static_cast<int>(i % 3) + 1);
        d.x(i, 0) += 1.5 * (i % 3);
        (*d.u)(i, 1) += 0.8 * (i % 3);
    }
    d.x += d.u->col(1) * oracle::random_matrix(rng, 1, 6);
    FitOptions o;
    o.method = Method::msda;
    o.nlambda = 8;
    const FittedModel with = fit(d, o);
    Dataset plain = d;
    plain.u.reset();
    plain.x = with.adjustment->apply(d.x, *d.u);
    const FittedModel without = fit(plain, o);
    REQUIRE(with.path.size() == without.path.size());
    for (std::size_t i = 0; i < with.path.size(); ++i) {
        CHECK((with.path[i].coef - without.path[i].coef).cwiseAbs().maxCoeff() <= 1e-12);
        const DiscriminantRule ext = with.adjustment->extend(without.path[i].rule);
        for (Index r = 0; r < 10; ++r) {
            const Vector ur = d.u->row(r).transpose();
            const Vector a = classify(with.path[i].rule, d.x.row(r).transpose(), &ur).scores;
            const Vector b = classify(ext, d.x.row(r).transpose(), &ur).scores;
            CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}
