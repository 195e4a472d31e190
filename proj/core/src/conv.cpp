// SPDX-License-Identifier: Apache-2.0
#include "ttconv/conv.hpp"

#include <cmath>
#include <string>

namespace ttconv {

void ConvLayerSpec::validate() const {
    if (kernel_size < 1) throw ShapeError("kernel size must be >= 1");
    if (in_channels < 1 || out_channels < 1) throw ShapeError("channel counts must be >= 1");
    if (in_plan.logical_size != in_channels) {
        throw ShapeError("input plan covers " + std::to_string(in_plan.logical_size) +
                         " channels, layer has " + std::to_string(in_channels));
    }
    if (out_plan.logical_size != out_channels) {
        throw ShapeError("output plan covers " + std::to_string(out_plan.logical_size) +
                         " channels, layer has " + std::to_string(out_channels));
    }
    if (in_plan.order() != out_plan.order()) {
        throw ShapeError("input and output plans must share the same order (" +
                         std::to_string(in_plan.order()) + " vs " +
                         std::to_string(out_plan.order()) + ")");
    }
    if (in_plan.order() < 1) throw ShapeError("plans must have at least one factor");
}

FeatureMap::FeatureMap(Index height, Index width, Index channels, std::vector<double> data)
        : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    if (height < 1 || width < 1 || channels < 1) {
        throw ShapeError("feature map dimensions must be >= 1");
    }
    if (static_cast<Index>(data_.size()) != height * width * channels) {
        throw ShapeError("feature map data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(height) + "x" +
                         std::to_string(width) + "x" + std::to_string(channels));
    }
}

FeatureMap FeatureMap::zeros(Index height, Index width, Index channels) {
    return FeatureMap(height, width, channels,
                      std::vector<double>(static_cast<std::size_t>(height * width * channels), 0.0));
}

std::size_t FeatureMap::offset(Index h, Index w, Index c) const {
    if (h < 1 || h > height_ || w < 1 || w > width_ || c < 1 || c > channels_) {
        throw RangeError("feature map index (" + std::to_string(h) + ", " + std::to_string(w) +
                         ", " + std::to_string(c) + ") out of range");
    }
    return static_cast<std::size_t>(((h - 1) * width_ + (w - 1)) * channels_ + (c - 1));
}

DenseConvKernel::DenseConvKernel(ConvLayerSpec spec, std::vector<double> weights,
                                 std::vector<double> bias)
        : spec_(std::move(spec)), weights_(std::move(weights)), bias_(std::move(bias)) {
    spec_.validate();
    const Index expected = spec_.kernel_size * spec_.kernel_size * spec_.in_channels *
                           spec_.out_channels;
    if (static_cast<Index>(weights_.size()) != expected) {
        throw ShapeError("kernel weight count " + std::to_string(weights_.size()) +
                         " does not match k^2*C*C-dot = " + std::to_string(expected));
    }
    if (spec_.has_bias) {
        if (static_cast<Index>(bias_.size()) != spec_.out_channels) {
            throw ShapeError("bias length " + std::to_string(bias_.size()) +
                             " does not match out_channels " +
                             std::to_string(spec_.out_channels));
        }
    } else if (!bias_.empty()) {
        throw ShapeError("bias supplied for a layer declared without bias");
    }
    for (double v : weights_) {
        if (!std::isfinite(v)) throw DataError("kernel weights contain non-finite values");
    }
    for (double v : bias_) {
        if (!std::isfinite(v)) throw DataError("kernel bias contains non-finite values");
    }
}

double DenseConvKernel::at(Index m, Index n, Index c, Index cdot) const {
    const Index k = spec_.kernel_size;
    if (m < 1 || m > k || n < 1 || n > k || c < 1 || c > spec_.in_channels || cdot < 1 ||
        cdot > spec_.out_channels) {
        throw RangeError("kernel index out of range");
    }
    return weights_[static_cast<std::size_t>(
        (((m - 1) * k + (n - 1)) * spec_.in_channels + (c - 1)) * spec_.out_channels + (cdot - 1))];
}

double DenseConvKernel::frobenius_norm() const {
    double sum = 0.0;
    for (double v : weights_) sum += v * v;
    return std::sqrt(sum);
}

FeatureMap dense_conv_forward(const DenseConvKernel& kernel, const FeatureMap& input,
                              std::uint64_t* mac_count) {
    const ConvLayerSpec& spec = kernel.spec();
    const Index k = spec.kernel_size;
    if (input.channels() != spec.in_channels) {
        throw ShapeError("input has " + std::to_string(input.channels()) +
                         " channels, layer expects " + std::to_string(spec.in_channels));
    }
    if (input.height() < k || input.width() < k) {
        throw ShapeError("input " + std::to_string(input.height()) + "x" +
                         std::to_string(input.width()) + " is smaller than the " +
                         std::to_string(k) + "x" + std::to_string(k) + " kernel");
    }
    const Index out_h = input.height() - k + 1;
    const Index out_w = input.width() - k + 1;

    FeatureMap out = FeatureMap::zeros(out_h, out_w, spec.out_channels);
    std::uint64_t macs = 0;
    for (Index oh = 1; oh <= out_h; ++oh) {
        for (Index ow = 1; ow <= out_w; ++ow) {
            for (Index cdot = 1; cdot <= spec.out_channels; ++cdot) {
                double acc = 0.0;
                for (Index m = 1; m <= k; ++m) {
                    for (Index n = 1; n <= k; ++n) {
                        for (Index c = 1; c <= spec.in_channels; ++c) {
                            acc += kernel.at(m, n, c, cdot) * input.at(oh + m - 1, ow + n - 1, c);
                            ++macs;
                        }
                    }
                }
                if (spec.has_bias) acc += kernel.bias()[static_cast<std::size_t>(cdot - 1)];
                out.at(oh, ow, cdot) = acc;
            }
        }
    }
    if (mac_count) *mac_count = macs;
    return out;
}

std::vector<double> kernel_to_matrix(const DenseConvKernel& kernel) {
    const ConvLayerSpec& spec = kernel.spec();
    const Index k = spec.kernel_size;
    const Index rows = k * k * spec.in_channels;
    std::vector<double> matrix(static_cast<std::size_t>(rows * spec.out_channels));
    for (Index m = 1; m <= k; ++m) {
        for (Index n = 1; n <= k; ++n) {
            for (Index c = 1; c <= spec.in_channels; ++c) {
                const Index row = m + k * (n - 1) + k * k * (c - 1);
                for (Index cdot = 1; cdot <= spec.out_channels; ++cdot) {
                    matrix[static_cast<std::size_t>((row - 1) * spec.out_channels + (cdot - 1))] =
                        kernel.at(m, n, c, cdot);
                }
            }
        }
    }
    return matrix;
}

DenseConvKernel matrix_to_kernel(const ConvLayerSpec& spec, std::span<const double> matrix,
                                 std::vector<double> bias) {
    const Index k = spec.kernel_size;
    const Index rows = k * k * spec.in_channels;
    if (static_cast<Index>(matrix.size()) != rows * spec.out_channels) {
        throw ShapeError("matrix size does not match (k^2*C) x C-dot");
    }
    std::vector<double> weights(matrix.size());
    for (Index m = 1; m <= k; ++m) {
        for (Index n = 1; n <= k; ++n) {
            for (Index c = 1; c <= spec.in_channels; ++c) {
                const Index row = m + k * (n - 1) + k * k * (c - 1);
                for (Index cdot = 1; cdot <= spec.out_channels; ++cdot) {
                    weights[static_cast<std::size_t>(
                        (((m - 1) * k + (n - 1)) * spec.in_channels + (c - 1)) *
                            spec.out_channels +
                        (cdot - 1))] =
                        matrix[static_cast<std::size_t>((row - 1) * spec.out_channels +
                                                        (cdot - 1))];
                }
            }
        }
    }
    return DenseConvKernel(spec, std::move(weights), std::move(bias));
}

std::uint64_t dense_conv_macs(const ConvLayerSpec& spec, Index out_height, Index out_width) {
    return static_cast<std::uint64_t>(out_height) * static_cast<std::uint64_t>(out_width) *
           static_cast<std::uint64_t>(spec.out_channels) *
           static_cast<std::uint64_t>(spec.kernel_size) *
           static_cast<std::uint64_t>(spec.kernel_size) *
           static_cast<std::uint64_t>(spec.in_channels);
}

} // namespace ttconv
