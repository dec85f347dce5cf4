#include "../oracles.hpp"

#include "sparda/covadjust.hpp"
#include "sparda/io.hpp"
#include "sparda/screen.hpp"
#include "sparda/simulate.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace sparda;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("sparda-test-" + std::to_string(Rng(std::random_device{}()).bits()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

Labels encode(const Dataset& d)
{
    return LabelMap::from_labels(d.y).encode(d.y);
}

} // namespace

TEST_CASE("vector simulator")
{
    VectorSimSpec spec;
    const SimPair sp = sim_binary_vector(spec);
    CHECK(sp.train.x.rows() == 150);
    CHECK(sp.train.x.cols() == 500);
    CHECK(sp.test.x.rows() == 1000);
    for (int v : sp.train.y) CHECK((v == 1 || v == 2));
    for (int v : sp.test.y) CHECK((v == 1 || v == 2));
    CHECK(sp.train.x.topRows(75).colwise().mean().cwiseAbs().maxCoeff() <= 4.0 / std::sqrt(75.0));

    // The known truth: Sigma has unit diagonal and 0.3 elsewhere, beta = 0.5 on ten entries.
    const Index p = 500;
    Matrix sigma = Matrix::Constant(p, p, 0.3);
    sigma.diagonal().setOnes();
    Vector beta = Vector::Zero(p);
    beta.head(10).setConstant(0.5);
    const Vector mu2 = sigma * beta;
    const double bayes = oracle::phi(-0.5 * std::sqrt(beta.dot(sigma * beta)));
    CHECK(vector_sim_bayes_error(spec) == doctest::Approx(bayes).epsilon(1e-12));
    Index wrong = 0;
    for (Index i = 0; i < sp.test.n(); ++i) {
        const int pred = beta.dot(sp.test.x.row(i).transpose() - mu2 / 2) > 0 ? 2 : 1;
        wrong += pred != sp.test.y[static_cast<std::size_t>(i)];
    }
    CHECK(std::abs(static_cast<double>(wrong) / 1000 - bayes) <= 0.03);

    const SimPair again = sim_binary_vector(spec);
    CHECK(again.train.x == sp.train.x);
    CHECK(again.test.y == sp.test.y);
}

TEST_CASE("tensor simulator")
{
    TensorSimSpec spec;
    const SimPair sp = sim_tensor_cov(spec);
    CHECK(sp.train.dims == Dims{10, 10, 10});
    CHECK(sp.train.x.rows() == 150);
    CHECK(sp.train.x.cols() == 1000);
    CHECK(sp.train.u->rows() == 150);
    CHECK(sp.train.u->cols() == 2);
    CHECK(sp.test.x.rows() == 1000);
    CHECK(sp.test.u->rows() == 1000);

    // Entry (1,1,1) carries unit noise plus the first covariate with unit loading.
    const Labels y = encode(sp.train);
    const Matrix xc = within_class_centered(sp.train.x, y, estimate_stats(sp.train.x, y, 2).means);
    CHECK(xc.col(0).squaredNorm() / 148 == doctest::Approx(2.0).epsilon(0.2));
    const AdjustedData adj = adjvec(sp.train.x, *sp.train.u, y, 2);
    const Matrix ac = within_class_centered(adj.x, y, estimate_stats(adj.x, y, 2).means);
    CHECK(ac.col(0).squaredNorm() / 148 == doctest::Approx(1.0).epsilon(0.2));
    CHECK(adj.adjustment.alpha(0, 0) == doctest::Approx(1.0).epsilon(0.2));
    CHECK(std::abs(adj.adjustment.alpha(1, 0)) < 0.3);
}

TEST_CASE("tensor simulator without signal is a coin toss")
{
    TensorSimSpec spec;
    spec.dims = {5, 5, 5};
    spec.b_value = 0;
    spec.alpha_value = 0;
    spec.phi_shift = 0;
    spec.seed = 3;
    const SimPair sp = sim_tensor_cov(spec);
    FitOptions o;
    o.method = Method::catch_;
    o.nlambda = 20;
    CvOptions cv;
    cv.threads = 1;
    CHECK(std::abs(cv_fit_evaluate(sp.train, sp.test, o, cv).test_error - 0.5) <= 0.05);
}

TEST_CASE("F screening")
{
    SUBCASE("hand value")
    {
        Matrix x(4, 1);
        x << 1, 2, 5, 6;
        Labels y(4);
        y << 0, 0, 1, 1;
        CHECK(f_screen(x, y, 2)[0] == doctest::Approx(32.0));
    }
    SUBCASE("scale invariance")
    {
        Rng rng(1);
        const Matrix x = oracle::random_matrix(rng, 30, 5);
        Labels y(30);
        for (Index i = 0; i < 30; ++i) y[i] = static_cast<int>(i % 3);
        Matrix scaled = x;
        scaled.col(2) *= 17.5;
        const Vector a = f_screen(x, y, 3), b = f_screen(scaled, y, 3);
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10 * a.cwiseAbs().maxCoeff());
    }
    SUBCASE("null data follows the F distribution on average")
    {
        Rng rng(2);
        const Matrix x = oracle::random_matrix(rng, 60, 3000);
        Labels y(60);
        for (Index i = 0; i < 60; ++i) y[i] = static_cast<int>(i % 3);
        CHECK(f_screen(x, y, 3).mean() == doctest::Approx(57.0 / 55.0).epsilon(0.1));
    }
    SUBCASE("constant columns rank first")
    {
        Rng rng(3);
        Matrix x = oracle::random_matrix(rng, 20, 4);
        Labels y(20);
        for (Index i = 0; i < 20; ++i) y[i] = static_cast<int>(i % 2);
        x.col(2).setConstant(1.0);
        const Vector f = f_screen(x, y, 2);
        CHECK(std::isinf(f[2]));
        CHECK(top_features(f, 1) == std::vector<Index>{2});
        CHECK(top_features(f, 10).size() == 4);
    }
    SUBCASE("ties keep column order")
    {
        Vector f(4);
        f << 1, 3, 3, 2;
        CHECK(top_features(f, 3) == std::vector<Index>{1, 2, 3});
    }
}

TEST_CASE("dataset files round trip")
{
    TempDir tmp;
    SUBCASE("vector data")
    {
        const SimPair sp = sim_binary_vector(VectorSimSpec{20, 5, 10, 0.3, 0.5, 3, 4});
        write_dataset(sp.train, tmp.file("v.csv"));
        const Dataset back = read_dataset(tmp.file("v.csv"));
        CHECK(back.x == sp.train.x);
        CHECK(back.y == sp.train.y);
        CHECK(back.dims == sp.train.dims);
        CHECK(!back.u);
    }
    SUBCASE("tensor data with covariates")
    {
        TensorSimSpec spec;
        spec.dims = {3, 2, 2};
        spec.n_per_class = 6;
        spec.n_test = 5;
        const SimPair sp = sim_tensor_cov(spec);
        write_dataset(sp.test, tmp.file("t.csv"));
        const Dataset back = read_dataset(tmp.file("t.csv"));
        CHECK(back.x == sp.test.x);
        CHECK(*back.u == *sp.test.u);
        CHECK(back.y == sp.test.y);
        CHECK(back.dims == spec.dims);
    }
    SUBCASE("no sidecar means label first")
    {
        std::ofstream(tmp.file("plain.csv")) << "1,0.5,2\n2,1.5,-3\n";
        const Dataset d = read_dataset(tmp.file("plain.csv"));
        CHECK(d.y == std::vector<int>{1, 2});
        CHECK(d.dims == Dims{2});
        CHECK(d.x(1, 1) == -3.0);
    }
    SUBCASE("dims that do not match the row are rejected")
    {
        std::ofstream(tmp.file("bad.csv")) << "1,0.5,2,3\n2,1.5,-3,4\n";
        std::ofstream(tmp.file("bad.json")) << R"({"dims":[2,2],"covariate_cols":[],"label_col":0})";
        CHECK_THROWS_AS(read_dataset(tmp.file("bad.csv")), ParseError);
    }
    SUBCASE("malformed fields name the line and field")
    {
        std::ofstream(tmp.file("junk.csv")) << "1,2,3\n1,x,3\n";
        try {
            read_csv_matrix(tmp.file("junk.csv"));
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(":2: field 2") != std::string::npos);
        }
        std::ofstream(tmp.file("ragged.csv")) << "1,2,3\n1,3\n";
        CHECK_THROWS_AS(read_csv_matrix(tmp.file("ragged.csv")), ParseError);
    }
    CHECK(sidecar_path("data/train.csv") == "data/train.json");
}

TEST_CASE("model files reproduce predictions")
{
    TempDir tmp;
    TensorSimSpec spec;
    spec.dims = {4, 3, 2};
    spec.n_per_class = 30;
    spec.n_test = 50;
    const SimPair sp = sim_tensor_cov(spec);
    for (Method m : {Method::catch_, Method::msda}) {
        FitOptions o;
        o.method = m;
        o.nlambda = 12;
        const FittedModel model = fit(sp.train, o);
        save_model(model, tmp.file("m.json"));
        const FittedModel back = load_model(tmp.file("m.json"));
        CHECK(predict(back, sp.test.x, &*sp.test.u) == predict(model, sp.test.x, &*sp.test.u));
        CHECK(back.path.size() == model.path.size());
        CHECK(back.path.back().coef == model.path.back().coef);
    }
    VectorSimSpec vs;
    vs.p = 30;
    vs.n_test = 60;
    const SimPair vp = sim_binary_vector(vs);
    Dataset skew = vp.train;
    skew.x = skew.x.array().exp().matrix();
    for (Method m : {Method::dsda, Method::road, Method::sos, Method::sesda}) {
        FitOptions o;
        o.method = m;
        o.nlambda = 12;
        const FittedModel model = fit(skew, o);
        save_model(model, tmp.file("v.json"));
        CHECK(predict(load_model(tmp.file("v.json")), vp.test.x) == predict(model, vp.test.x));
    }
    std::ofstream(tmp.file("nope.json")) << R"({"format":"other"})";
    CHECK_THROWS_AS(load_model(tmp.file("nope.json")), ParseError);
}
