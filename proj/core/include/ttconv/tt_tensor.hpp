// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ttconv/dense_tensor.hpp"

namespace ttconv {

/// One 3-way tensor-train core of shape (left_rank, mode_size, right_rank),
/// stored row-major (right rank fastest).
struct TtCore {
    Index left_rank = 0;
    Index mode_size = 0;
    Index right_rank = 0;
    std::vector<double> data;

    TtCore() = default;
    TtCore(Index left, Index mode, Index right);
    TtCore(Index left, Index mode, Index right, std::vector<double> values);

    Index size() const { return left_rank * mode_size * right_rank; }

    double at(Index l, Index m, Index r) const {
        return data[static_cast<std::size_t>((l * mode_size + m) * right_rank + r)];
    }
    double& at(Index l, Index m, Index r) {
        return data[static_cast<std::size_t>((l * mode_size + m) * right_rank + r)];
    }
};

/// Tensor in tensor-train format: a chain of 3-way cores with boundary ranks 1.
/// Element lookup is a strict left-to-right product of core slices; the dense
/// reconstruction enumerates indices with the exact same chain arithmetic, so
/// both agree bit-for-bit.
///
/// Immutable after construction; safe for concurrent reads.
class TtTensor {
public:
    static constexpr Index kDefaultReconstructBudget = Index(1) << 26;

    explicit TtTensor(std::vector<TtCore> cores);

    const std::vector<TtCore>& cores() const { return cores_; }
    Index order() const { return static_cast<Index>(cores_.size()); }
    const std::vector<Index>& mode_sizes() const { return mode_sizes_; }
    /// Full rank chain r_0..r_N including the boundary 1s.
    const std::vector<Index>& ranks() const { return ranks_; }

    std::uint64_t param_count() const;

    /// Element at a 1-based multi-index, evaluated left to right.
    double element(std::span<const Index> index) const;
    double element(std::initializer_list<Index> index) const {
        return element(std::span<const Index>(index.begin(), index.size()));
    }

    /// Dense tensor holding every element face; refuses outputs larger than
    /// max_elements.
    DenseTensor reconstruct(Index max_elements = kDefaultReconstructBudget) const;

private:
    std::vector<TtCore> cores_;
    std::vector<Index> mode_sizes_;
    std::vector<Index> ranks_;
};

/// Storage cost of a TT representation: sum_i r_{i-1} * I_i * r_i.
/// `ranks` is the full chain r_0..r_N with boundary entries equal to 1.
std::uint64_t tt_param_count(std::span<const Index> mode_sizes, std::span<const Index> ranks);

namespace detail {
/// One chain step: row vector (1 x left_rank) times the m-th slice
/// (left_rank x right_rank) of a core, with a fixed accumulation order. Both
/// TtTensor::element and TtTensor::reconstruct funnel through this routine.
/// `m` is 0-based.
std::vector<double> chain_step(std::span<const double> v, const TtCore& core, Index m);
} // namespace detail

} // namespace ttconv
