#include "sparda/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace sparda {

using nlohmann::json;

namespace {

std::string where(const std::string& path, std::size_t line, std::size_t field)
{
    return path + ":" + std::to_string(line) + ": field " + std::to_string(field);
}

json matrix_json(const Matrix& m)
{
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<Scalar>(m.data(), m.data() + m.size())}};
}

Matrix matrix_from(const json& j)
{
    const Index r = j.at("rows").get<Index>();
    const Index c = j.at("cols").get<Index>();
    const auto data = j.at("data").get<std::vector<Scalar>>();
    if (static_cast<Index>(data.size()) != r * c) throw ParseError("matrix data length does not match its shape");
    return Eigen::Map<const Matrix>(data.data(), r, c);
}

json vector_json(const Vector& v)
{
    return std::vector<Scalar>(v.data(), v.data() + v.size());
}

Vector vector_from(const json& j)
{
    const auto data = j.get<std::vector<Scalar>>();
    return Eigen::Map<const Vector>(data.data(), static_cast<Index>(data.size()));
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

CsvLayout read_layout(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sidecar " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    CsvLayout l;
    try {
        l.dims = j.at("dims").get<Dims>();
        if (j.contains("covariate_cols")) l.covariate_cols = j.at("covariate_cols").get<std::vector<Index>>();
        if (j.contains("label_col") && !j.at("label_col").is_null()) l.label_col = j.at("label_col").get<Index>();
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return l;
}

} // namespace

std::string sidecar_path(const std::string& csv_path)
{
    return std::filesystem::path(csv_path).replace_extension(".json").string();
}

std::string format_double(Scalar v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Matrix read_csv_matrix(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<Scalar> values;
    Index cols = -1;
    Index rows = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        Index count = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t end = line.find(',', start);
            const std::string field = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
            const char* b = field.c_str();
            char* e = nullptr;
            errno = 0;
            const Scalar v = std::strtod(b, &e);
            while (*e == ' ' || *e == '\t') ++e;
            if (e == b || *e != '\0') throw ParseError(where(path, lineno, static_cast<std::size_t>(count) + 1) +
                                                       ": not a number: '" + field + "'");
            values.push_back(v);
            ++count;
            if (end == std::string::npos) break;
            start = end + 1;
        }
        if (cols < 0) cols = count;
        if (count != cols)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                             " fields, found " + std::to_string(count));
        ++rows;
    }
    if (rows == 0) return Matrix(0, 0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
    return m;
}

Dataset read_dataset(const std::string& csv_path)
{
    const std::string side = sidecar_path(csv_path);
    if (std::filesystem::exists(side)) return read_dataset(csv_path, read_layout(side));
    const Matrix raw = read_csv_matrix(csv_path);
    if (raw.cols() < 2) throw ParseError(csv_path + ": need a label column and at least one predictor");
    CsvLayout l;
    l.dims = {raw.cols() - 1};
    l.label_col = 0;
    Dataset d;
    d.dims = l.dims;
    d.x = raw.rightCols(raw.cols() - 1);
    for (Index i = 0; i < raw.rows(); ++i) {
        const Scalar v = raw(i, 0);
        if (v != std::round(v)) throw ParseError(csv_path + ":" + std::to_string(i + 1) + ": label is not an integer");
        d.y.push_back(static_cast<int>(v));
    }
    return d;
}

Dataset read_dataset(const std::string& csv_path, const CsvLayout& layout)
{
    const Matrix raw = read_csv_matrix(csv_path);
    if (layout.dims.empty()) throw ParseError(csv_path + ": layout has no dims");
    for (Index p : layout.dims)
        if (p < 1) throw ParseError(csv_path + ": dims must be positive");
    std::set<Index> special(layout.covariate_cols.begin(), layout.covariate_cols.end());
    if (layout.label_col) special.insert(*layout.label_col);
    if (special.size() != layout.covariate_cols.size() + (layout.label_col ? 1u : 0u))
        throw ParseError(csv_path + ": label and covariate columns overlap");
    for (Index c : special)
        if (c < 0 || c >= raw.cols()) throw ParseError(csv_path + ": column index " + std::to_string(c) + " out of range");
    const Index P = dims_product(layout.dims);
    const Index available = raw.cols() - static_cast<Index>(special.size());
    if (available != P)
        throw ParseError(csv_path + ": dims " + dims_to_string(layout.dims) + " need " + std::to_string(P) +
                         " predictor columns, row has " + std::to_string(available));

    Dataset d;
    d.dims = layout.dims;
    d.x.resize(raw.rows(), P);
    Index out = 0;
    for (Index c = 0; c < raw.cols(); ++c)
        if (!special.count(c)) d.x.col(out++) = raw.col(c);
    if (!layout.covariate_cols.empty()) {
        d.u = Matrix(raw.rows(), static_cast<Index>(layout.covariate_cols.size()));
        for (std::size_t r = 0; r < layout.covariate_cols.size(); ++r)
            d.u->col(static_cast<Index>(r)) = raw.col(layout.covariate_cols[r]);
    }
    if (layout.label_col) {
        for (Index i = 0; i < raw.rows(); ++i) {
            const Scalar v = raw(i, *layout.label_col);
            if (v != std::round(v))
                throw ParseError(csv_path + ":" + std::to_string(i + 1) + ": label is not an integer");
            d.y.push_back(static_cast<int>(v));
        }
    }
    return d;
}

void write_dataset(const Dataset& data, const std::string& csv_path)
{
    data.validate();
    std::ofstream out = open_out(csv_path);
    const Index q = data.num_covariates();
    for (Index i = 0; i < data.n(); ++i) {
        bool first = true;
        auto put = [&](const std::string& s) {
            if (!first) out << ',';
            out << s;
            first = false;
        };
        if (data.has_labels()) put(std::to_string(data.y[static_cast<std::size_t>(i)]));
        for (Index r = 0; r < q; ++r) put(format_double((*data.u)(i, r)));
        for (Index j = 0; j < data.num_features(); ++j) put(format_double(data.x(i, j)));
        out << '\n';
    }
    json side;
    side["dims"] = data.dims;
    const Index offset = data.has_labels() ? 1 : 0;
    std::vector<Index> cov;
    for (Index r = 0; r < q; ++r) cov.push_back(offset + r);
    side["covariate_cols"] = cov;
    side["label_col"] = data.has_labels() ? json(0) : json(nullptr);
    open_out(sidecar_path(csv_path)) << side.dump() << '\n';
}

void write_table(const std::string& path, const std::vector<CsvColumn>& columns)
{
    std::ofstream out = open_out(path);
    std::size_t rows = 0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << columns[c].name;
        rows = std::max(rows, columns[c].values.size());
    }
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ',';
            if (i < columns[c].values.size()) out << format_double(columns[c].values[i]);
        }
        out << '\n';
    }
}

void write_label_matrix(const std::string& path, const LabelMatrix& labels)
{
    std::ofstream out = open_out(path);
    for (Index i = 0; i < labels.rows(); ++i) {
        for (Index l = 0; l < labels.cols(); ++l) out << (l ? "," : "") << labels(i, l);
        out << '\n';
    }
}

json to_json(const FittedModel& m)
{
    json j;
    j["format"] = "sparda-model";
    j["version"] = 1;
    j["method"] = to_string(m.method);
    j["labels"] = m.labels.codes();
    j["dims"] = m.dims;
    j["model_option"] = m.model_option ? json(to_string(*m.model_option)) : json(nullptr);
    j["priors"] = vector_json(m.priors);
    j["means"] = matrix_json(m.means);
    if (m.transform) {
        const MonotoneTransform& t = *m.transform;
        json vars = json::array();
        for (const auto& v : t.variables()) vars.push_back({{"major", v.major}, {"minor", v.minor}, {"shift", v.shift}});
        j["transform"] = {{"variant", to_string(t.variant())},
                          {"weight_major", t.weight_major()},
                          {"weight_minor", t.weight_minor()},
                          {"variables", vars}};
    } else {
        j["transform"] = nullptr;
    }
    if (m.adjustment) {
        const Adjustment& a = *m.adjustment;
        j["adjustment"] = {{"alpha", matrix_json(a.alpha)},
                           {"phi", matrix_json(a.phi)},
                           {"psi", matrix_json(a.psi)},
                           {"gamma", matrix_json(a.gamma)}};
    } else {
        j["adjustment"] = nullptr;
    }
    json path = json::array();
    for (const PathEntry& e : m.path)
        path.push_back({{"lambda", e.lambda},
                        {"input_lambda", e.input_lambda},
                        {"df", e.df},
                        {"converged", e.converged},
                        {"coef", matrix_json(e.coef)},
                        {"rule_coef", matrix_json(e.rule.coef)},
                        {"rule_intercept", vector_json(e.rule.intercept)}});
    j["path"] = path;
    j["warnings"] = m.warnings;
    return j;
}

FittedModel model_from_json(const json& j)
{
    try {
        if (j.value("format", "") != "sparda-model") throw ParseError("not a model file");
        FittedModel m;
        m.method = method_from_string(j.at("method").get<std::string>());
        m.labels = LabelMap(j.at("labels").get<std::vector<int>>());
        m.dims = j.at("dims").get<Dims>();
        if (!j.at("model_option").is_null())
            m.model_option = model_option_from_string(j.at("model_option").get<std::string>());
        m.priors = vector_from(j.at("priors"));
        m.means = matrix_from(j.at("means"));
        if (!j.at("transform").is_null()) {
            const json& t = j.at("transform");
            std::vector<MonotoneTransform::Variable> vars;
            for (const json& v : t.at("variables"))
                vars.push_back({v.at("major").get<std::vector<Scalar>>(), v.at("minor").get<std::vector<Scalar>>(),
                                v.at("shift").get<Scalar>()});
            m.transform = MonotoneTransform(sesda_variant_from_string(t.at("variant").get<std::string>()),
                                            t.at("weight_major").get<Scalar>(), t.at("weight_minor").get<Scalar>(),
                                            std::move(vars));
        }
        std::shared_ptr<CovariateTerm> term;
        if (!j.at("adjustment").is_null()) {
            const json& a = j.at("adjustment");
            Adjustment adj;
            adj.alpha = matrix_from(a.at("alpha"));
            adj.phi = matrix_from(a.at("phi"));
            adj.psi = matrix_from(a.at("psi"));
            adj.gamma = matrix_from(a.at("gamma"));
            term = std::make_shared<CovariateTerm>(CovariateTerm{adj.alpha, adj.gamma});
            m.adjustment = std::move(adj);
        }
        for (const json& e : j.at("path")) {
            PathEntry p;
            p.lambda = e.at("lambda").get<Scalar>();
            p.input_lambda = e.at("input_lambda").get<Scalar>();
            p.df = e.at("df").get<Index>();
            p.converged = e.at("converged").get<bool>();
            p.coef = matrix_from(e.at("coef"));
            p.rule.coef = matrix_from(e.at("rule_coef"));
            p.rule.intercept = vector_from(e.at("rule_intercept"));
            p.rule.covariates = term;
            if (p.rule.coef.rows() != dims_product(m.dims) || p.rule.coef.cols() != m.labels.size())
                throw ParseError("path entry shape does not match dims and labels");
            m.path.push_back(std::move(p));
        }
        m.warnings = j.value("warnings", std::vector<std::string>{});
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
}

void save_model(const FittedModel& model, const std::string& path)
{
    open_out(path) << to_json(model).dump() << '\n';
}

FittedModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return model_from_json(j);
}

json to_json(const CvReport& r)
{
    return {{"lambdas", r.lambdas},       {"mean_error", r.mean_error},       {"nfolds", r.nfolds},
            {"seed", r.seed},             {"rule", to_string(r.rule)},        {"chosen_lambda", r.chosen_lambda},
            {"chosen_index", r.chosen_index}, {"fold_of", r.fold_of}};
}

} // namespace sparda
