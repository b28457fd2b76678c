#include "portnet/metrics.hpp"

#include <cmath>
#include <limits>

#include "portnet/errors.hpp"

namespace portnet {

double r2_score(std::span<const double> predictions, std::span<const double> truths) {
    if (predictions.size() != truths.size() || truths.size() < 2)
        throw SchemaMismatch("r2_score needs two equally sized series of length >= 2");
    double mean_truth = 0.0;
    for (double t : truths) mean_truth += t;
    mean_truth /= static_cast<double>(truths.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        ss_res += (truths[i] - predictions[i]) * (truths[i] - predictions[i]);
        ss_tot += (truths[i] - mean_truth) * (truths[i] - mean_truth);
    }
    if (ss_tot == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 - ss_res / ss_tot;
}

std::vector<double> r2_per_column(const RowMatrix& predictions, const RowMatrix& truths) {
    if (predictions.rows != truths.rows || predictions.cols != truths.cols)
        throw SchemaMismatch("r2_per_column shapes differ");
    std::vector<double> out;
    std::vector<double> p(predictions.rows), t(predictions.rows);
    for (int c = 0; c < predictions.cols; ++c) {
        for (int r = 0; r < predictions.rows; ++r) {
            p[r] = predictions.at(r, c);
            t[r] = truths.at(r, c);
        }
        out.push_back(r2_score(p, t));
    }
    return out;
}

double mean(std::span<const double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

RowMatrix predict_rows(const TrainableModel& model, const RowMatrix& x,
                       std::span<const int> rows) {
    RowMatrix out(static_cast<int>(rows.size()), model.output_width());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::vector<double> p = model.predict(x.row(rows[i]));
        std::copy(p.begin(), p.end(), out.row(static_cast<int>(i)).begin());
    }
    return out;
}

std::vector<double> r2_on_rows(const TrainableModel& model, const RowMatrix& x,
                               const RowMatrix& y, std::span<const int> rows) {
    const RowMatrix pred = predict_rows(model, x, rows);
    RowMatrix truth(static_cast<int>(rows.size()), y.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = y.row(rows[i]);
        std::copy(src.begin(), src.end(), truth.row(static_cast<int>(i)).begin());
    }
    return r2_per_column(pred, truth);
}

} // namespace portnet
