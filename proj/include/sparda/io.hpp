#pragma once

#include "sparda/model_select.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sparda {

/// Layout of a dataset CSV: which column holds the label, which hold
/// covariates, and the predictor dims. Stored as a JSON sidecar.
struct CsvLayout {
    Dims dims;
    std::vector<Index> covariate_cols;
    std::optional<Index> label_col;
};

/// "data/train.csv" -> "data/train.json".
std::string sidecar_path(const std::string& csv_path);

/// Headerless numeric CSV. Throws ParseError naming the line and field.
Matrix read_csv_matrix(const std::string& path);

/// Reads a dataset. Without a sidecar, column 0 is the label and the rest
/// are vector predictors.
Dataset read_dataset(const std::string& csv_path);
Dataset read_dataset(const std::string& csv_path, const CsvLayout& layout);

/// Writes label, covariates, then vec(X) per row, plus the sidecar.
void write_dataset(const Dataset& data, const std::string& csv_path);

std::string format_double(Scalar v);

struct CsvColumn {
    std::string name;
    std::vector<Scalar> values;
};

/// Small helper for tidy tables with a header row.
void write_table(const std::string& path, const std::vector<CsvColumn>& columns);
void write_label_matrix(const std::string& path, const LabelMatrix& labels);

nlohmann::json to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& j);

void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

nlohmann::json to_json(const CvReport& report);

} // namespace sparda
