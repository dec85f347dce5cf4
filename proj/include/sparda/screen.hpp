#pragma once

#include "sparda/stats.hpp"

#include <vector>

namespace sparda {

/// One-way ANOVA F statistic per column. Columns with zero within-class
/// variance get +infinity so they rank first.
Vector f_screen(const Matrix& x, const Labels& y, Index K);

/// Indices of the m largest statistics, largest first; ties keep column order.
std::vector<Index> top_features(const Vector& f, Index m);

} // namespace sparda
