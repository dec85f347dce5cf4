#include "../oracles.hpp"

#include <doctest.h>

using namespace sparda;

namespace {

Tensor tensor_from(const Dims& dims, std::initializer_list<double> values)
{
    Vector v(static_cast<Index>(values.size()));
    Index i = 0;
    for (double x : values) v[i++] = x;
    return Tensor(dims, v);
}

} // namespace

TEST_CASE("unfold shape and fibre layout")
{
    Rng rng(1);
    const Tensor t = oracle::random_tensor(rng, {2, 3, 4});
    const Matrix u = unfold(t, 1);
    CHECK(u.rows() == 3);
    CHECK(u.cols() == 8);

    // Entry (i1, i2, i3) of a 2x2x2 tensor sits at row i1, column i2 + 2 i3 of unfold-0.
    const Tensor s = oracle::random_tensor(rng, {2, 2, 2});
    const Matrix u0 = unfold(s, 0);
    for (Index i1 = 0; i1 < 2; ++i1)
        for (Index i2 = 0; i2 < 2; ++i2)
            for (Index i3 = 0; i3 < 2; ++i3) CHECK(u0(i1, i2 + 2 * i3) == s({i1, i2, i3}));
}

TEST_CASE("unfold rejects a bad mode")
{
    Rng rng(2);
    const Tensor t = oracle::random_tensor(rng, {2, 3});
    CHECK_THROWS_AS(unfold(t, 2), DimensionError);
    CHECK_THROWS_AS(unfold(t, -1), DimensionError);
}

TEST_CASE("refold inverts unfold on every mode")
{
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        Dims dims;
        const Index M = 1 + static_cast<Index>(rng.below(4));
        for (Index m = 0; m < M; ++m) dims.push_back(1 + static_cast<Index>(rng.below(4)));
        const Tensor t = oracle::random_tensor(rng, dims);
        for (Index k = 0; k < M; ++k) CHECK(refold(unfold(t, k), k, dims) == t);
    }
}

TEST_CASE("mode product matches the unfolded matrix product")
{
    Rng rng(4);
    const Tensor t = oracle::random_tensor(rng, {3, 2, 4});
    for (Index k = 0; k < 3; ++k) {
        const Matrix g = oracle::random_matrix(rng, 5, t.dim(k));
        const Tensor r = mode_product(t, k, g);
        CHECK(r.dim(k) == 5);
        CHECK((unfold(r, k) - g * unfold(t, k)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(mode_product(t, k, Matrix::Identity(t.dim(k), t.dim(k))) == t);
        CHECK(mode_product(t, k, Matrix::Zero(t.dim(k), t.dim(k))).vec().isZero(0));
    }
    CHECK_THROWS_AS(mode_product(t, 0, Matrix::Zero(2, 2)), DimensionError);
}

TEST_CASE("mode product with a row of ones sums columns of the unfolding")
{
    const Tensor t = tensor_from({2, 2}, {1, 2, 3, 4}); // [[1,3],[2,4]]
    const Tensor r = mode_product(t, 0, Matrix::Ones(1, 2));
    CHECK(r.dims() == Dims{1, 2});
    CHECK(r({0, 0}) == 3);
    CHECK(r({0, 1}) == 7);
    const Tensor v = mode_vector_product(t, 0, Vector::Ones(2));
    CHECK(v.dims() == Dims{2});
    CHECK(v({1}) == 7);
}

TEST_CASE("mode products on distinct modes commute")
{
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const Tensor t = oracle::random_tensor(rng, {3, 4, 2});
        const Matrix a = oracle::random_matrix(rng, 2, 3);
        const Matrix b = oracle::random_matrix(rng, 5, 2);
        const Tensor ab = mode_product(mode_product(t, 0, a), 2, b);
        const Tensor ba = mode_product(mode_product(t, 2, b), 0, a);
        CHECK((ab.vec() - ba.vec()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("tucker transform and the vec-Kronecker identity")
{
    Rng rng(6);
    for (int rep = 0; rep < 30; ++rep) {
        const Dims dims{2, 3, 2};
        const Tensor c = oracle::random_tensor(rng, dims);
        std::vector<Matrix> gs;
        for (Index p : dims) gs.push_back(oracle::random_matrix(rng, 1 + static_cast<Index>(rng.below(3)), p));
        const Tensor r = tucker_transform(c, gs);
        CHECK((r.vec() - oracle::kron_reverse(gs) * c.vec()).cwiseAbs().maxCoeff() <= 1e-10);
    }
    const Tensor c = oracle::random_tensor(rng, {2, 2, 2});
    std::vector<Matrix> id(3, Matrix::Identity(2, 2));
    CHECK(tucker_transform(c, id) == c);
    id[1].setZero();
    CHECK(tucker_transform(c, id).vec().isZero(0));
    CHECK_THROWS_AS(tucker_transform(c, std::vector<Matrix>(2, Matrix::Identity(2, 2))), DimensionError);
}

TEST_CASE("tucker transform adjoint identity")
{
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const Tensor c = oracle::random_tensor(rng, {2, 3, 4});
        std::vector<Matrix> gs, gts;
        for (Index p : c.dims()) {
            gs.push_back(oracle::random_matrix(rng, 3, p));
            gts.push_back(gs.back().transpose());
        }
        const Tensor d = oracle::random_tensor(rng, {3, 3, 3});
        CHECK(std::abs(inner(tucker_transform(c, gs), d) - inner(c, tucker_transform(d, gts))) <= 1e-10);
    }
}

TEST_CASE("inner product")
{
    const Tensor a = tensor_from({2, 2}, {1, 1, 1, 1});
    const Tensor b = tensor_from({2, 2}, {1, 3, 2, 4});
    CHECK(inner(a, b) == 10);
    CHECK(inner(b, Tensor({2, 2})) == 0);
    CHECK(inner(b, b) == doctest::Approx(30));
    CHECK_THROWS_AS(inner(a, Tensor({4})), DimensionError);
}

TEST_CASE("tensor normal sampler")
{
    SUBCASE("identity covariances give standard normal entries")
    {
        Rng rng(8);
        TensorNormalSampler<double> s({Tensor({2, 2, 2}), std::vector<Matrix>(3, Matrix::Identity(2, 2))});
        double sum = 0;
        for (int i = 0; i < 10000; ++i) sum += s(rng)({0, 0, 0});
        CHECK(std::abs(sum / 10000) <= 4.0 / 100.0);
    }
    SUBCASE("seeded draws are reproducible")
    {
        Rng r1(9), r2(9);
        TensorNormalParams<double> p{Tensor({3, 2}), {Matrix::Identity(3, 3), 2 * Matrix::Identity(2, 2)}};
        CHECK(sample_tensor_normal(p, r1) == sample_tensor_normal(p, r2));
    }
    SUBCASE("non positive definite covariance is rejected")
    {
        Matrix bad(2, 2);
        bad << 1, 2, 2, 1;
        CHECK_THROWS_AS(TensorNormalSampler<double>({Tensor({2, 2}), {bad, Matrix::Identity(2, 2)}}),
                        FactorizationError);
    }
}

TEST_CASE("dense tensor validates its data")
{
    CHECK_THROWS_AS(Tensor({2, 2}, Vector::Zero(3)), DimensionError);
    CHECK_THROWS_AS(Tensor(Dims{}), DimensionError);
    CHECK_THROWS_AS(Tensor(Dims{2, 0}), DimensionError);
}
