// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ttconv/conv.hpp"
#include "ttconv/tt_matrix.hpp"
#include "ttconv/tt_svd.hpp"

namespace ttconv {

/// Convolution kernel in TT form: one 3-way spatial core over the merged k^2
/// window mode followed by one 4-way core per channel-factor pair. Channel
/// counts are padded up to their plan products with zero-weight dummy
/// channels before decomposition.
///
/// Immutable after construction; forward passes may run concurrently.
class TtConvKernel {
public:
    TtConvKernel(ConvLayerSpec spec, TtCore spatial_core, std::vector<TtMatrixCore> channel_cores,
                 std::vector<double> bias);

    const ConvLayerSpec& spec() const { return spec_; }
    const TtCore& spatial_core() const { return spatial_core_; }
    const std::vector<TtMatrixCore>& channel_cores() const { return channel_cores_; }
    std::span<const double> bias() const { return bias_; }

    /// Internal bond ranks r_1..r_N (the boundary ranks on both chain ends
    /// are 1 and not listed).
    std::vector<Index> internal_ranks() const;

    /// Number of stored core scalars (bias excluded).
    std::uint64_t param_count() const;

    /// The kernel as a plain tensor train over the merged modes
    /// (k^2, c_1*cdot_1, ..., c_N*cdot_N).
    TtTensor as_merged_train() const;

private:
    ConvLayerSpec spec_;
    TtCore spatial_core_;
    std::vector<TtMatrixCore> channel_cores_;
    std::vector<double> bias_;
};

/// Whether reconstruction verifies that dummy-channel weights stay below the
/// integrity threshold. Rank truncation legitimately spills small values into
/// the dummy positions, so equivalence checks against truncated kernels skip
/// the gate; full-rank and corruption-detection paths keep it.
enum class DummyCheck {
    kStrict, ///< reject dummy weights above the threshold
    kSkip,   ///< drop dummy weights without checking
};

constexpr double kDummyWeightTolerance = 1e-12;

/// Zero-pads the channel modes per the layer plans, merges each
/// (c_i, cdot_i) pair into one mode, and runs TT-SVD over the resulting
/// (N+1)-mode chain.
TtConvKernel decompose_kernel(const DenseConvKernel& kernel, const DecomposeOptions& options);

/// Uniform internal rank cap on every bond.
TtConvKernel decompose_kernel(const DenseConvKernel& kernel, Index uniform_rank);

/// Dense kernel over the logical (unpadded) channel counts. With
/// DummyCheck::kStrict, any reconstructed dummy-channel weight above
/// `dummy_tolerance` raises IntegrityError.
DenseConvKernel reconstruct_kernel(const TtConvKernel& kernel,
                                   DummyCheck check = DummyCheck::kStrict,
                                   double dummy_tolerance = kDummyWeightTolerance);

/// TT-format forward pass. Numerically matches
/// dense_conv_forward(reconstruct_kernel(kernel), input) without ever
/// materializing the dense kernel: input channels are zero-padded, image
/// patches are contracted with the spatial core over the k^2 window mode,
/// then the channel cores are applied left to right over the factorized
/// channel modes; padded output channels are dropped and bias added last.
/// When mac_count is non-null it receives the exact multiply-accumulate
/// count.
FeatureMap tt_conv_forward(const TtConvKernel& kernel, const FeatureMap& input,
                           std::uint64_t* mac_count = nullptr);

/// Analytic MAC count of tt_conv_forward for the given internal ranks and
/// output extent. Matches the instrumented counter exactly.
std::uint64_t tt_conv_macs(const ConvLayerSpec& spec, std::span<const Index> internal_ranks,
                           Index out_height, Index out_width);

} // namespace ttconv
