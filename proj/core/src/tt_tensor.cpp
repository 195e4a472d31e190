// SPDX-License-Identifier: Apache-2.0
#include "ttconv/tt_tensor.hpp"

#include <string>

namespace ttconv {

TtCore::TtCore(Index left, Index mode, Index right)
        : left_rank(left), mode_size(mode), right_rank(right),
          data(static_cast<std::size_t>(left * mode * right), 0.0) {
    if (left < 1 || mode < 1 || right < 1) {
        throw ShapeError("core dimensions must be >= 1");
    }
}

TtCore::TtCore(Index left, Index mode, Index right, std::vector<double> values)
        : left_rank(left), mode_size(mode), right_rank(right), data(std::move(values)) {
    if (left < 1 || mode < 1 || right < 1) {
        throw ShapeError("core dimensions must be >= 1");
    }
    if (static_cast<Index>(data.size()) != size()) {
        throw ShapeError("core data length " + std::to_string(data.size()) +
                         " does not match shape (" + std::to_string(left) + ", " +
                         std::to_string(mode) + ", " + std::to_string(right) + ")");
    }
}

TtTensor::TtTensor(std::vector<TtCore> cores) : cores_(std::move(cores)) {
    if (cores_.empty()) throw ShapeError("tensor train needs at least one core");
    if (cores_.front().left_rank != 1) {
        throw ShapeError("leading boundary rank must be 1, got " +
                         std::to_string(cores_.front().left_rank));
    }
    if (cores_.back().right_rank != 1) {
        throw ShapeError("trailing boundary rank must be 1, got " +
                         std::to_string(cores_.back().right_rank));
    }
    ranks_.push_back(cores_.front().left_rank);
    for (std::size_t i = 0; i < cores_.size(); ++i) {
        if (i + 1 < cores_.size() && cores_[i].right_rank != cores_[i + 1].left_rank) {
            throw ShapeError("rank mismatch between cores " + std::to_string(i + 1) + " and " +
                             std::to_string(i + 2) + ": " + std::to_string(cores_[i].right_rank) +
                             " vs " + std::to_string(cores_[i + 1].left_rank));
        }
        mode_sizes_.push_back(cores_[i].mode_size);
        ranks_.push_back(cores_[i].right_rank);
    }
}

std::uint64_t TtTensor::param_count() const {
    std::uint64_t total = 0;
    for (const TtCore& core : cores_) total += static_cast<std::uint64_t>(core.size());
    return total;
}

namespace detail {

std::vector<double> chain_step(std::span<const double> v, const TtCore& core, Index m) {
    std::vector<double> out(static_cast<std::size_t>(core.right_rank));
    for (Index r = 0; r < core.right_rank; ++r) {
        double acc = 0.0;
        for (Index l = 0; l < core.left_rank; ++l) {
            acc += v[static_cast<std::size_t>(l)] * core.at(l, m, r);
        }
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

} // namespace detail

double TtTensor::element(std::span<const Index> index) const {
    if (index.size() != cores_.size()) {
        throw RangeError("multi-index has " + std::to_string(index.size()) +
                         " components, tensor has " + std::to_string(cores_.size()) + " modes");
    }
    std::vector<double> v{1.0};
    for (std::size_t i = 0; i < cores_.size(); ++i) {
        if (index[i] < 1 || index[i] > mode_sizes_[i]) {
            throw RangeError("index " + std::to_string(index[i]) + " out of range for mode " +
                             std::to_string(i + 1) + " (size " + std::to_string(mode_sizes_[i]) +
                             ")");
        }
        v = detail::chain_step(v, cores_[i], index[i] - 1);
    }
    return v[0];
}

DenseTensor TtTensor::reconstruct(Index max_elements) const {
    Index total = shape_product(mode_sizes_);
    if (total > max_elements) {
        throw CapacityError("reconstruction of " + std::to_string(total) +
                            " elements exceeds budget of " + std::to_string(max_elements));
    }
    DenseTensor out = DenseTensor::zeros(mode_sizes_);
    std::span<double> flat = out.mutable_data();

    // Depth-first enumeration in row-major order, reusing the partial chain
    // product shared by every index with a common prefix. Each element sees
    // the identical operation sequence as element(), so values match it
    // bit-for-bit.
    std::size_t cursor = 0;
    std::vector<double> root{1.0};
    auto walk = [&](auto&& self, std::size_t level, const std::vector<double>& prefix) -> void {
        const TtCore& core = cores_[level];
        for (Index m = 0; m < core.mode_size; ++m) {
            std::vector<double> next = detail::chain_step(prefix, core, m);
            if (level + 1 == cores_.size()) {
                flat[cursor++] = next[0];
            } else {
                self(self, level + 1, next);
            }
        }
    };
    walk(walk, 0, root);
    return out;
}

std::uint64_t tt_param_count(std::span<const Index> mode_sizes, std::span<const Index> ranks) {
    if (ranks.size() != mode_sizes.size() + 1) {
        throw ShapeError("rank chain must have one more entry than the mode list (" +
                         std::to_string(ranks.size()) + " vs " + std::to_string(mode_sizes.size()) +
                         ")");
    }
    if (mode_sizes.empty()) throw ShapeError("mode list must be non-empty");
    if (ranks.front() != 1 || ranks.back() != 1) {
        throw ShapeError("boundary ranks must be 1");
    }
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < mode_sizes.size(); ++i) {
        if (mode_sizes[i] < 1 || ranks[i] < 1 || ranks[i + 1] < 1) {
            throw ShapeError("mode sizes and ranks must be >= 1");
        }
        total += static_cast<std::uint64_t>(ranks[i]) * static_cast<std::uint64_t>(mode_sizes[i]) *
                 static_cast<std::uint64_t>(ranks[i + 1]);
    }
    return total;
}

} // namespace ttconv
