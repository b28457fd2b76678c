#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace portnet {

/// Dense row-major matrix of doubles for tabular data.
struct RowMatrix {
    int rows = 0, cols = 0;
    std::vector<double> v;

    RowMatrix() = default;
    RowMatrix(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c) {}
    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
    std::span<const double> row(int r) const {
        return std::span<const double>(v).subspan(static_cast<std::size_t>(r) * cols, cols);
    }
    std::span<double> row(int r) {
        return std::span<double>(v).subspan(static_cast<std::size_t>(r) * cols, cols);
    }
};

} // namespace portnet
