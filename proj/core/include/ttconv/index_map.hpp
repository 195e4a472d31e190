// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "ttconv/dense_tensor.hpp"

namespace ttconv {

/// How the factors of a dimension are chosen.
enum class FactorStrategy {
    kBalanced, ///< near-equal factors, padding the dimension up if needed
    kExplicit, ///< caller-provided factors
};

/// Factorization of a logical dimension (e.g. a channel count) into N factors,
/// possibly padding the dimension up to the factor product. Padded positions
/// occupy the tail of the flat range, i.e. flat indices in
/// (logical_size, padded_size].
struct FactorizationPlan {
    Index logical_size = 0;
    std::vector<Index> factors;
    Index padded_size = 0;
    Index pad_count = 0;

    Index order() const { return static_cast<Index>(factors.size()); }
    bool operator==(const FactorizationPlan&) const = default;
};

/// Balanced factorization: all factors drawn from {f, f+1} for some f, picking
/// the smallest such product >= size; ties resolve to the lexicographically
/// smallest non-decreasing tuple.
FactorizationPlan plan_balanced(Index size, Index order);

/// Validates caller-provided factors against the logical size.
FactorizationPlan plan_explicit(Index size, std::vector<Index> factors);

/// Little-endian mixed-radix decomposition of a 1-based flat index:
///   flat = x_1 + sum_{i>=2} (x_i - 1) * prod_{j<i} d_j
/// The first factor varies fastest.
std::vector<Index> flat_to_multi(const FactorizationPlan& plan, Index flat);

/// Exact inverse of flat_to_multi.
Index multi_to_flat(const FactorizationPlan& plan, std::span<const Index> multi);

} // namespace ttconv
