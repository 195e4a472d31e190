// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "ttconv/dense_tensor.hpp"
#include "ttconv/tt_tensor.hpp"

namespace ttconv {

/// Truncation controls for tt_decompose. At least one of the two must be set.
/// When both are given, each bond satisfies both the cap and the tolerance
/// budget (the cap wins if they conflict).
struct DecomposeOptions {
    /// Per-bond maximum ranks (size order-1). Empty means uncapped.
    std::vector<Index> bond_caps;
    /// Relative Frobenius-norm error bound in (0, 1). The per-step SVD
    /// truncation threshold is tolerance / sqrt(N-1) * ||A||_F, the standard
    /// split that makes the accumulated error meet the requested bound.
    std::optional<double> tolerance;
};

/// Sequential truncated-SVD decomposition over left-to-right unfoldings.
/// Mode sizes of the result equal dense.shape(); every bond rank is at most
/// min(cap, full rank of the unfolding). A zero tensor yields an all-rank-1
/// zero train. Non-finite input raises DataError.
TtTensor tt_decompose(const DenseTensor& dense, const DecomposeOptions& options);

/// Uniform cap on every bond.
TtTensor tt_decompose_max_rank(const DenseTensor& dense, Index uniform_cap);

/// Tolerance-only mode: ||dense - reconstruct|| <= tolerance * ||dense||.
TtTensor tt_decompose_tolerance(const DenseTensor& dense, double tolerance);

} // namespace ttconv
