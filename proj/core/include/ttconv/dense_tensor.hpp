// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ttconv/errors.hpp"

namespace ttconv {

using Index = std::int64_t;

/// Product of a dimension list, with overflow checking.
Index shape_product(std::span<const Index> shape);

/// Row-major N-order tensor with explicit shape. The last mode varies fastest
/// in memory. Public multi-indices are 1-based, matching the rest of the API;
/// flat offsets are 0-based.
///
/// Immutable for concurrent readers once construction/filling is done.
class DenseTensor {
public:
    DenseTensor(std::vector<Index> shape, std::vector<double> data);

    static DenseTensor zeros(std::vector<Index> shape);

    const std::vector<Index>& shape() const { return shape_; }
    Index order() const { return static_cast<Index>(shape_.size()); }
    Index size() const { return static_cast<Index>(data_.size()); }

    std::span<const double> data() const { return data_; }
    std::span<double> mutable_data() { return data_; }

    /// 0-based row-major offset of a 1-based multi-index.
    Index flat_offset(std::span<const Index> index) const;

    double at(std::span<const Index> index) const { return data_[flat_offset(index)]; }
    double& at(std::span<const Index> index) { return data_[flat_offset(index)]; }

    double at(std::initializer_list<Index> index) const {
        return at(std::span<const Index>(index.begin(), index.size()));
    }
    double& at(std::initializer_list<Index> index) {
        return at(std::span<const Index>(index.begin(), index.size()));
    }

    double frobenius_norm() const;

    /// True when every stored value is finite.
    bool all_finite() const;

private:
    std::vector<Index> shape_;
    std::vector<double> data_;
};

} // namespace ttconv
