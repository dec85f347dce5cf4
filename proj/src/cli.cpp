#include "sparda/cli.hpp"

#include "sparda/io.hpp"
#include "sparda/model_select.hpp"
#include "sparda/screen.hpp"
#include "sparda/simulate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <limits>

namespace sparda::cli {

using nlohmann::json;

namespace {

struct FitArgs {
    std::string method = "dsda";
    std::string data;
    std::vector<double> lambdas;
    Index nlambda = 100;
    double ratio = 0.05;
    bool log_spacing = false;
    Index dfmax = -1;
    std::string model_option;
    std::string variant = "pooled";
    double tol = 1e-7;
    Index max_sweeps = 100000;
};

void add_fit_args(CLI::App* cmd, FitArgs& a)
{
    cmd->add_option("--method", a.method, "dsda, road, sos, sesda, msda or catch")->capture_default_str();
    cmd->add_option("--data", a.data, "training CSV (sidecar JSON next to it, if any)")->required();
    cmd->add_option("--lambda", a.lambdas, "explicit penalty values")->delimiter(',');
    cmd->add_option("--nlambda", a.nlambda, "length of the generated grid")->capture_default_str();
    cmd->add_option("--lambda-min-ratio", a.ratio, "smallest grid value as a fraction of lambda_max")
        ->capture_default_str();
    cmd->add_flag("--log-spacing", a.log_spacing, "space the generated grid on the log scale");
    cmd->add_option("--dfmax", a.dfmax, "stop the path once more variables are selected (msda, catch)");
    cmd->add_option("--model-option", a.model_option, "binary, multi.original or multi.modified (msda only)");
    cmd->add_option("--variant", a.variant, "SeSDA transform: naive or pooled")->capture_default_str();
    cmd->add_option("--tol", a.tol, "coordinate descent tolerance")->capture_default_str();
    cmd->add_option("--max-sweeps", a.max_sweeps, "coordinate descent sweep limit")->capture_default_str();
}

FitOptions to_options(const FitArgs& a)
{
    FitOptions o;
    o.method = method_from_string(a.method);
    o.lambdas = a.lambdas;
    o.nlambda = a.nlambda;
    o.lambda_min_ratio = a.ratio;
    o.log_spacing = a.log_spacing;
    o.dfmax = a.dfmax;
    if (!a.model_option.empty()) {
        if (o.method != Method::msda) throw ConfigError("--model-option is only valid with --method msda");
        o.model_option = model_option_from_string(a.model_option);
    }
    o.sesda_variant = sesda_variant_from_string(a.variant);
    o.solver.tol = a.tol;
    o.solver.max_sweeps = a.max_sweeps;
    validate(o.solver);
    return o;
}

void log_warnings(const FittedModel& m, std::ostream& err)
{
    for (const auto& w : m.warnings) err << "warning: " << w << '\n';
}

json path_summary(const FittedModel& m)
{
    std::vector<Scalar> lambdas;
    for (const auto& e : m.path) lambdas.push_back(e.lambda);
    return lambdas;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sparse discriminant analysis for vector and tensor predictors"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "sparda 1.0");

    // simulate
    auto* sim = app.add_subcommand("simulate", "write a simulated train/test pair");
    std::string kind = "vector";
    std::string out_dir;
    std::uint64_t seed = 123456;
    Index sim_p = 500, sim_n = 75, sim_test = 1000;
    sim->add_option("--kind", kind, "vector or tensor")->capture_default_str()->check(CLI::IsMember({"vector", "tensor"}));
    sim->add_option("--out-dir", out_dir, "directory for train.csv and test.csv")->required();
    sim->add_option("--seed", seed, "random seed")->envname("SPARDA_SEED")->capture_default_str();
    sim->add_option("--p", sim_p, "number of predictors (vector kind)")->capture_default_str();
    sim->add_option("--n-per-class", sim_n, "training observations per class")->capture_default_str();
    sim->add_option("--n-test", sim_test, "test observations")->capture_default_str();

    // screen
    auto* scr = app.add_subcommand("screen", "rank predictors by the one-way F statistic");
    std::string scr_data, scr_out;
    Index top = 0;
    scr->add_option("--data", scr_data, "labelled CSV")->required();
    scr->add_option("--top", top, "also report the indices of the top m predictors");
    scr->add_option("--out", scr_out, "CSV of (index, f) per predictor");

    // fit
    auto* fitc = app.add_subcommand("fit", "fit a solution path and save the model");
    FitArgs fa;
    std::string model_out, table_out;
    add_fit_args(fitc, fa);
    fitc->add_option("--model", model_out, "output model JSON")->required();
    fitc->add_option("--path-table", table_out, "output CSV of lambda, df and training error");

    // cv
    auto* cvc = app.add_subcommand("cv", "cross-validate the penalty");
    FitArgs ca;
    Index nfolds = 5;
    std::string rule = "min", cv_out, cv_test, cv_model;
    std::uint64_t fold_seed = 1;
    unsigned threads = 0;
    add_fit_args(cvc, ca);
    cvc->add_option("--nfolds", nfolds, "number of folds")->capture_default_str();
    cvc->add_option("--rule", rule, "tie-break among equally good lambdas: min or max")->capture_default_str();
    cvc->add_option("--seed", fold_seed, "fold assignment seed")->envname("SPARDA_SEED")->capture_default_str();
    cvc->add_option("--threads", threads, "worker threads for folds (0 = all cores)")->capture_default_str();
    cvc->add_option("--out", cv_out, "output CV report JSON");
    cvc->add_option("--test", cv_test, "labelled test CSV: refit at the chosen lambda and report its error");
    cvc->add_option("--model", cv_model, "save the refitted model (requires --test or fits on train only)");

    // predict
    auto* pred = app.add_subcommand("predict", "apply a saved model");
    std::string pm, pd, pout, perr;
    pred->add_option("--model", pm, "model JSON")->required();
    pred->add_option("--data", pd, "CSV to classify")->required();
    pred->add_option("--out", pout, "output CSV of labels, one column per lambda");
    pred->add_option("--errors", perr, "output CSV of lambda and error rate (needs labels)");

    std::vector<std::string> argv_store = args;
    if (argv_store.empty()) argv_store.push_back("sparda");
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        json summary;
        if (sim->parsed()) {
            std::filesystem::create_directories(out_dir);
            SimPair pair;
            if (kind == "vector") {
                VectorSimSpec spec;
                spec.p = sim_p;
                spec.n_per_class = sim_n;
                spec.n_test = sim_test;
                spec.seed = seed;
                pair = sim_binary_vector(spec);
            } else {
                TensorSimSpec spec;
                spec.n_per_class = sim_n;
                spec.n_test = sim_test;
                spec.seed = seed;
                pair = sim_tensor_cov(spec);
            }
            const std::string tr = (std::filesystem::path(out_dir) / "train.csv").string();
            const std::string te = (std::filesystem::path(out_dir) / "test.csv").string();
            write_dataset(pair.train, tr);
            write_dataset(pair.test, te);
            summary = {{"command", "simulate"}, {"kind", kind},          {"seed", seed},
                       {"train", tr},           {"test", te},            {"n_train", pair.train.n()},
                       {"n_test", pair.test.n()}, {"dims", pair.train.dims}};
        } else if (scr->parsed()) {
            const Dataset d = read_dataset(scr_data);
            if (!d.has_labels()) throw ConfigError("screen needs labelled data");
            const LabelMap lm = LabelMap::from_labels(d.y);
            const Vector f = f_screen(d.x, lm.encode(d.y), lm.size());
            if (!scr_out.empty()) {
                std::vector<Scalar> idx(static_cast<std::size_t>(f.size()));
                for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = static_cast<Scalar>(j + 1);
                write_table(scr_out, {{"index", idx}, {"f", std::vector<Scalar>(f.data(), f.data() + f.size())}});
            }
            std::vector<Index> best = top_features(f, top);
            for (Index& b : best) ++b;
            summary = {{"command", "screen"}, {"p", f.size()}, {"top", best}};
            if (!scr_out.empty()) summary["out"] = scr_out;
        } else if (fitc->parsed()) {
            const FitOptions o = to_options(fa);
            const Dataset d = read_dataset(fa.data);
            const FittedModel m = fit(d, o);
            log_warnings(m, err);
            save_model(m, model_out);
            if (!table_out.empty()) {
                const std::vector<Scalar> e = path_errors(m, d);
                std::vector<Scalar> lam, in, df;
                for (const auto& p : m.path) {
                    lam.push_back(p.lambda);
                    in.push_back(p.input_lambda);
                    df.push_back(static_cast<Scalar>(p.df));
                }
                write_table(table_out, {{"lambda", lam}, {"input_lambda", in}, {"df", df}, {"train_error", e}});
            }
            summary = {{"command", "fit"}, {"method", to_string(m.method)}, {"n_lambda", m.path.size()},
                       {"lambdas", path_summary(m)}, {"model", model_out}};
        } else if (cvc->parsed()) {
            const FitOptions o = to_options(ca);
            CvOptions cv;
            cv.nfolds = nfolds;
            cv.rule = cv_rule_from_string(rule);
            cv.seed = fold_seed;
            cv.threads = threads;
            const Dataset d = read_dataset(ca.data);
            summary = {{"command", "cv"}, {"method", to_string(o.method)}};
            CvReport rep;
            if (!cv_test.empty()) {
                const Dataset t = read_dataset(cv_test);
                CvEvaluation ev = cv_fit_evaluate(d, t, o, cv);
                rep = ev.cv;
                summary["test_error"] = ev.test_error;
                if (!cv_model.empty()) save_model(ev.model, cv_model);
            } else {
                rep = kfold_cv(d, o, cv);
                if (!cv_model.empty()) {
                    FitOptions refit = o;
                    refit.lambdas = {rep.chosen_lambda};
                    save_model(fit(d, refit), cv_model);
                }
            }
            if (!cv_out.empty()) std::ofstream(cv_out) << to_json(rep).dump() << '\n';
            summary["chosen_lambda"] = rep.chosen_lambda;
            summary["mean_error"] = rep.mean_error[static_cast<std::size_t>(rep.chosen_index)];
            summary["nfolds"] = rep.nfolds;
            summary["rule"] = to_string(rep.rule);
        } else if (pred->parsed()) {
            const FittedModel m = load_model(pm);
            const Dataset d = read_dataset(pd);
            if (m.adjustment && !d.u) throw ConfigError("model uses covariates but the data has none");
            const LabelMatrix labels = predict(m, d.x, d.u ? &*d.u : nullptr);
            if (!pout.empty()) write_label_matrix(pout, labels);
            summary = {{"command", "predict"}, {"n", d.n()}, {"n_lambda", labels.cols()}};
            if (d.has_labels()) {
                const std::vector<Scalar> e = path_errors(m, d);
                if (!e.empty()) {
                    const auto best = std::min_element(e.begin(), e.end()) - e.begin();
                    summary["min_error"] = e[static_cast<std::size_t>(best)];
                    summary["lambda_at_min"] = m.path[static_cast<std::size_t>(best)].lambda;
                }
                if (!perr.empty()) {
                    std::vector<Scalar> lam;
                    for (const auto& p : m.path) lam.push_back(p.lambda);
                    write_table(perr, {{"lambda", lam}, {"error", e}});
                }
            } else if (!perr.empty()) {
                throw ConfigError("--errors needs labelled data");
            }
            if (!pout.empty()) summary["out"] = pout;
        }
        out << summary.dump() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DimensionError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace sparda::cli
