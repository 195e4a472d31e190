// SPDX-License-Identifier: Apache-2.0
#include "ttconv/tt_matrix.hpp"

#include <string>

namespace ttconv {

TtMatrixCore::TtMatrixCore(Index left, Index rows, Index cols, Index right)
        : left_rank(left), row_size(rows), col_size(cols), right_rank(right),
          data(static_cast<std::size_t>(left * rows * cols * right), 0.0) {
    if (left < 1 || rows < 1 || cols < 1 || right < 1) {
        throw ShapeError("matrix core dimensions must be >= 1");
    }
}

TtMatrixCore::TtMatrixCore(Index left, Index rows, Index cols, Index right,
                           std::vector<double> values)
        : left_rank(left), row_size(rows), col_size(cols), right_rank(right),
          data(std::move(values)) {
    if (left < 1 || rows < 1 || cols < 1 || right < 1) {
        throw ShapeError("matrix core dimensions must be >= 1");
    }
    if (static_cast<Index>(data.size()) != size()) {
        throw ShapeError("matrix core data length does not match shape");
    }
}

TtMatrix::TtMatrix(std::vector<TtMatrixCore> cores) : cores_(std::move(cores)) {
    if (cores_.empty()) throw ShapeError("matrix train needs at least one core");
    if (cores_.front().left_rank != 1 || cores_.back().right_rank != 1) {
        throw ShapeError("boundary ranks must be 1");
    }
    std::vector<Index> row_factors, col_factors;
    ranks_.push_back(cores_.front().left_rank);
    for (std::size_t i = 0; i < cores_.size(); ++i) {
        if (i + 1 < cores_.size() && cores_[i].right_rank != cores_[i + 1].left_rank) {
            throw ShapeError("rank mismatch between matrix cores " + std::to_string(i + 1) +
                             " and " + std::to_string(i + 2));
        }
        row_factors.push_back(cores_[i].row_size);
        col_factors.push_back(cores_[i].col_size);
        ranks_.push_back(cores_[i].right_rank);
    }
    row_plan_ = plan_explicit(shape_product(row_factors), std::move(row_factors));
    col_plan_ = plan_explicit(shape_product(col_factors), std::move(col_factors));
}

double TtMatrix::element(Index row, Index col) const {
    if (row < 1 || row > rows()) {
        throw RangeError("row index " + std::to_string(row) + " out of range [1, " +
                         std::to_string(rows()) + "]");
    }
    if (col < 1 || col > cols()) {
        throw RangeError("column index " + std::to_string(col) + " out of range [1, " +
                         std::to_string(cols()) + "]");
    }
    std::vector<Index> row_multi = flat_to_multi(row_plan_, row);
    std::vector<Index> col_multi = flat_to_multi(col_plan_, col);

    std::vector<double> v{1.0};
    for (std::size_t i = 0; i < cores_.size(); ++i) {
        const TtMatrixCore& core = cores_[i];
        const Index q = row_multi[i] - 1;
        const Index p = col_multi[i] - 1;
        std::vector<double> next(static_cast<std::size_t>(core.right_rank));
        for (Index r = 0; r < core.right_rank; ++r) {
            double acc = 0.0;
            for (Index l = 0; l < core.left_rank; ++l) {
                acc += v[static_cast<std::size_t>(l)] * core.at(l, q, p, r);
            }
            next[static_cast<std::size_t>(r)] = acc;
        }
        v = std::move(next);
    }
    return v[0];
}

} // namespace ttconv
