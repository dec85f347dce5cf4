#include "../oracles.hpp"

#include "sparda/model.hpp"
#include "sparda/sesda.hpp"
#include "sparda/simulate.hpp"

#include <doctest.h>

using namespace sparda;

namespace {

struct Binary {
    Matrix x;
    Labels y;
};

Binary skewed(Rng& rng, Index n0, Index n1, Index p)
{
    Binary b;
    b.x = oracle::random_matrix(rng, n0 + n1, p);
    b.y = Labels::Zero(n0 + n1);
    b.y.tail(n1).setOnes();
    b.x.bottomRows(n1).array() += 0.7;
    b.x = b.x.array().exp().matrix();
    return b;
}

} // namespace

TEST_CASE("normal quantile inverts the normal CDF")
{
    for (double p : {1e-300, 1e-12, 1e-4, 0.01, 0.2, 0.5, 0.7, 0.975, 1 - 1e-9}) {
        const double q = normal_quantile(p);
        CHECK(oracle::phi(q) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054));
}

TEST_CASE("winsorized ECDF")
{
    std::vector<double> s(100);
    for (int i = 0; i < 100; ++i) s[static_cast<std::size_t>(i)] = i + 1;
    CHECK(winsorized_ecdf(s, 50.0) == 0.5);
    CHECK(winsorized_ecdf(s, 50.5) == 0.5);
    CHECK(winsorized_ecdf(s, 1000.0) == 1.0 - 1.0 / 10000);
    CHECK(winsorized_ecdf(s, -5.0) == 1.0 / 10000);
    CHECK(winsorized_ecdf(s, 100.0) == 1.0 - 1.0 / 10000);
    CHECK_THROWS_AS(winsorized_ecdf(std::vector<double>{}, 0.0), EstimationError);
}

TEST_CASE("variant names")
{
    CHECK(sesda_variant_from_string("naive") == SesdaVariant::naive);
    CHECK(to_string(SesdaVariant::pooled) == "pooled");
    CHECK_THROWS_AS(sesda_variant_from_string("both"), ConfigError);
}

TEST_CASE("naive transform of the major class looks standard normal")
{
    Rng rng(1);
    const Binary b = skewed(rng, 80, 50, 5);
    const MonotoneTransform h = MonotoneTransform::fit(b.x, b.y, SesdaVariant::naive);
    const Matrix t = h.apply(b.x);
    const double crit = 1.628 / std::sqrt(80.0); // KS critical value at level 0.01
    for (Index j = 0; j < 5; ++j) {
        std::vector<double> z;
        for (Index i = 0; i < 80; ++i) z.push_back(t(i, j));
        std::sort(z.begin(), z.end());
        double d = 0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double f = oracle::phi(z[i]);
            d = std::max({d, std::abs(f - static_cast<double>(i) / 80), std::abs(static_cast<double>(i + 1) / 80 - f)});
        }
        CHECK(d < crit);
    }
}

TEST_CASE("transform depends on ranks only")
{
    Rng rng(2);
    const Binary b = skewed(rng, 40, 30, 4);
    const Matrix cubed = b.x.array().cube().matrix();
    for (SesdaVariant v : {SesdaVariant::naive, SesdaVariant::pooled}) {
        const Matrix a = MonotoneTransform::fit(b.x, b.y, v).apply(b.x);
        const Matrix c = MonotoneTransform::fit(cubed, b.y, v).apply(cubed);
        CHECK((a - c).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("transforms are monotone and finite")
{
    Rng rng(3);
    const Binary b = skewed(rng, 30, 45, 3);
    for (SesdaVariant v : {SesdaVariant::naive, SesdaVariant::pooled}) {
        const MonotoneTransform h = MonotoneTransform::fit(b.x, b.y, v);
        for (Index j = 0; j < 3; ++j) {
            double prev = -std::numeric_limits<double>::infinity();
            for (double x = -1; x < 20; x += 0.01) {
                const double cur = h.apply(j, x);
                CHECK(std::isfinite(cur));
                CHECK(cur >= prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("larger class drives the major map")
{
    Rng rng(4);
    const Binary b = skewed(rng, 20, 50, 2);
    const MonotoneTransform h = MonotoneTransform::fit(b.x, b.y, SesdaVariant::pooled);
    CHECK(h.weight_major() == doctest::Approx(50.0 / 70));
    CHECK(h.variables()[0].major.size() == 50);
}

TEST_CASE("pooled map reduces to the naive map when the minor weight vanishes")
{
    Rng rng(5);
    const Binary b = skewed(rng, 40, 20, 3);
    const MonotoneTransform pooled = MonotoneTransform::fit(b.x, b.y, SesdaVariant::pooled);
    const MonotoneTransform naive = MonotoneTransform::fit(b.x, b.y, SesdaVariant::naive);
    const MonotoneTransform limit(SesdaVariant::pooled, 1.0, 0.0, pooled.variables());
    CHECK((limit.apply(b.x) - naive.apply(b.x)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("SeSDA input checks")
{
    Labels y(4);
    y << 0, 0, 0, 1;
    CHECK_THROWS_AS(MonotoneTransform::fit(Matrix::Zero(4, 2), y, SesdaVariant::pooled), EstimationError);
}

TEST_CASE("SeSDA on Gaussian data stays close to DSDA")
{
    double gap = 0;
    for (std::uint64_t s = 0; s < 3; ++s) {
        VectorSimSpec spec;
        spec.seed = 50 + s;
        const SimPair sp = sim_binary_vector(spec);
        FitOptions o;
        const std::vector<double> ds = path_errors(fit(sp.train, o), sp.test);
        o.method = Method::sesda;
        const std::vector<double> se = path_errors(fit(sp.train, o), sp.test);
        gap += *std::min_element(se.begin(), se.end()) - *std::min_element(ds.begin(), ds.end());
    }
    CHECK(std::abs(gap / 3) <= 0.03);
}
