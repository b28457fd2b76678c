#pragma once

#include <span>
#include <vector>

#include "portnet/mlp.hpp"
#include "portnet/row_matrix.hpp"

namespace portnet {

/// Coefficient of determination, 1 - SS_res/SS_tot. Needs >= 2 points;
/// returns NaN (the undefined marker) when the truths are all equal.
double r2_score(std::span<const double> predictions, std::span<const double> truths);

/// Per-column R2 of two equally shaped matrices.
std::vector<double> r2_per_column(const RowMatrix& predictions, const RowMatrix& truths);

double mean(std::span<const double> values);

/// Model predictions over selected dataset rows, one output row per input row.
RowMatrix predict_rows(const TrainableModel& model, const RowMatrix& x,
                       std::span<const int> rows);

/// Per-target R2 on a row subset of a dataset.
std::vector<double> r2_on_rows(const TrainableModel& model, const RowMatrix& x,
                               const RowMatrix& y, std::span<const int> rows);

} // namespace portnet
