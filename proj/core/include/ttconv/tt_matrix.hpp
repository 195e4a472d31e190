// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "ttconv/index_map.hpp"
#include "ttconv/tt_tensor.hpp"

namespace ttconv {

/// One 4-way matrix-TT core of shape (left_rank, row_size, col_size,
/// right_rank), stored row-major. The merged mode (row_size * col_size) keeps
/// the row factor slow and the column factor fast, so a 3-way core over the
/// merged mode reinterprets as this layout with no data movement.
struct TtMatrixCore {
    Index left_rank = 0;
    Index row_size = 0;
    Index col_size = 0;
    Index right_rank = 0;
    std::vector<double> data;

    TtMatrixCore() = default;
    TtMatrixCore(Index left, Index rows, Index cols, Index right);
    TtMatrixCore(Index left, Index rows, Index cols, Index right, std::vector<double> values);

    Index size() const { return left_rank * row_size * col_size * right_rank; }

    double at(Index l, Index q, Index p, Index r) const {
        return data[static_cast<std::size_t>(((l * row_size + q) * col_size + p) * right_rank + r)];
    }
    double& at(Index l, Index q, Index p, Index r) {
        return data[static_cast<std::size_t>(((l * row_size + q) * col_size + p) * right_rank + r)];
    }
};

/// Matrix in TT format: a logical Q x P matrix whose indices are mapped to
/// factor tuples by the little-endian mixed-radix bijections and evaluated as
/// a left-to-right chain of core slices.
class TtMatrix {
public:
    explicit TtMatrix(std::vector<TtMatrixCore> cores);

    const std::vector<TtMatrixCore>& cores() const { return cores_; }
    Index order() const { return static_cast<Index>(cores_.size()); }
    Index rows() const { return row_plan_.padded_size; }
    Index cols() const { return col_plan_.padded_size; }
    const std::vector<Index>& row_factors() const { return row_plan_.factors; }
    const std::vector<Index>& col_factors() const { return col_plan_.factors; }
    const std::vector<Index>& ranks() const { return ranks_; }

    /// Element (row, col), both 1-based.
    double element(Index row, Index col) const;

private:
    std::vector<TtMatrixCore> cores_;
    FactorizationPlan row_plan_;
    FactorizationPlan col_plan_;
    std::vector<Index> ranks_;
};

} // namespace ttconv
