// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ttconv/index_map.hpp"

namespace ttconv {

/// Static description of one convolution layer: a square k x k kernel mapping
/// in_channels to out_channels, plus the factorization plans used when the
/// layer is put in TT form. Both plans share the same order.
struct ConvLayerSpec {
    Index kernel_size = 1;  // k
    Index in_channels = 1;  // C
    Index out_channels = 1; // C-dot
    bool has_bias = false;
    FactorizationPlan in_plan;
    FactorizationPlan out_plan;

    Index tt_order() const { return in_plan.order(); }
    std::uint64_t dense_param_count() const {
        return static_cast<std::uint64_t>(kernel_size) * static_cast<std::uint64_t>(kernel_size) *
               static_cast<std::uint64_t>(in_channels) * static_cast<std::uint64_t>(out_channels);
    }
    void validate() const;
};

/// Spatial feature map of shape (H, W, C), row-major with the channel fastest.
/// Indices are 1-based like the rest of the API.
class FeatureMap {
public:
    FeatureMap(Index height, Index width, Index channels, std::vector<double> data);
    static FeatureMap zeros(Index height, Index width, Index channels);

    Index height() const { return height_; }
    Index width() const { return width_; }
    Index channels() const { return channels_; }
    Index size() const { return static_cast<Index>(data_.size()); }

    std::span<const double> data() const { return data_; }
    std::span<double> mutable_data() { return data_; }

    double at(Index h, Index w, Index c) const { return data_[offset(h, w, c)]; }
    double& at(Index h, Index w, Index c) { return data_[offset(h, w, c)]; }

private:
    std::size_t offset(Index h, Index w, Index c) const;

    Index height_ = 0;
    Index width_ = 0;
    Index channels_ = 0;
    std::vector<double> data_;
};

/// Uncompressed convolution kernel: weights laid out row-major over
/// (m, n, c, c-dot) with the output channel fastest, plus an optional bias of
/// length out_channels.
class DenseConvKernel {
public:
    DenseConvKernel(ConvLayerSpec spec, std::vector<double> weights, std::vector<double> bias);

    const ConvLayerSpec& spec() const { return spec_; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> bias() const { return bias_; }

    /// Weight at 1-based (m, n, c, c-dot); m and n index the kernel window
    /// rows and columns.
    double at(Index m, Index n, Index c, Index cdot) const;

    double frobenius_norm() const;

private:
    ConvLayerSpec spec_;
    std::vector<double> weights_;
    std::vector<double> bias_;
};

/// Valid convolution, stride 1, no spatial padding: output extent
/// (H-k+1, W-k+1, out_channels). When mac_count is non-null it receives the
/// exact number of multiply-accumulate operations executed.
FeatureMap dense_conv_forward(const DenseConvKernel& kernel, const FeatureMap& input,
                              std::uint64_t* mac_count = nullptr);

/// Kernel reshaped to a (k^2 * C) x C-dot matrix, row-major. Row index is the
/// little-endian composition of (m, n, c): row = m + k*(n-1) + k^2*(c-1).
std::vector<double> kernel_to_matrix(const DenseConvKernel& kernel);

/// Inverse of kernel_to_matrix.
DenseConvKernel matrix_to_kernel(const ConvLayerSpec& spec, std::span<const double> matrix,
                                 std::vector<double> bias);

/// Multiply-accumulate count of the dense forward pass for the given output
/// extent; bias additions are not MACs and are excluded.
std::uint64_t dense_conv_macs(const ConvLayerSpec& spec, Index out_height, Index out_width);

} // namespace ttconv
