#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparda {

using Scalar = double;
using Index = Eigen::Index;

using Vector = Eigen::VectorX<Scalar>;
using Matrix = Eigen::MatrixX<Scalar>;
using RowVector = Eigen::RowVectorX<Scalar>;
using IndexVector = Eigen::VectorX<Index>;
using LabelMatrix = Eigen::MatrixXi;

// Error taxonomy. Everything derives from Error so callers can catch broadly.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct EstimationError : Error {
    using Error::Error;
};
struct FactorizationError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
// Invalid configuration or argument combination (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

enum class Method { dsda, road, sos, sesda, msda, catch_ };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

} // namespace sparda
