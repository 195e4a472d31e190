// SPDX-License-Identifier: Apache-2.0
#include "ttconv/tt_conv.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace ttconv {

namespace {

/// Row-major strides of the merged tensor (k^2, E_1, ..., E_N) plus the
/// additive offset contributed by each flat channel index. With the merged
/// pair index e_i = (c_i - 1) * cdot_size_i + (cdot_i - 1), the offset of
/// (s, c*, cdot*) splits into s-part + in-part + out-part.
struct MergedLayout {
    Index spatial_stride = 0;
    std::vector<Index> in_part;  // indexed by c* - 1
    std::vector<Index> out_part; // indexed by cdot* - 1
    std::vector<Index> merged_modes;
};

MergedLayout merged_layout(const ConvLayerSpec& spec) {
    const Index order = spec.tt_order();
    MergedLayout layout;
    layout.merged_modes.push_back(spec.kernel_size * spec.kernel_size);
    for (Index i = 0; i < order; ++i) {
        layout.merged_modes.push_back(spec.in_plan.factors[static_cast<std::size_t>(i)] *
                                      spec.out_plan.factors[static_cast<std::size_t>(i)]);
    }
    std::vector<Index> strides(layout.merged_modes.size());
    Index stride = 1;
    for (std::size_t i = layout.merged_modes.size(); i-- > 0;) {
        strides[i] = stride;
        stride *= layout.merged_modes[i];
    }
    layout.spatial_stride = strides[0];

    layout.in_part.resize(static_cast<std::size_t>(spec.in_plan.padded_size));
    for (Index c = 1; c <= spec.in_plan.padded_size; ++c) {
        std::vector<Index> multi = flat_to_multi(spec.in_plan, c);
        Index part = 0;
        for (Index i = 0; i < order; ++i) {
            part += (multi[static_cast<std::size_t>(i)] - 1) *
                    spec.out_plan.factors[static_cast<std::size_t>(i)] *
                    strides[static_cast<std::size_t>(i + 1)];
        }
        layout.in_part[static_cast<std::size_t>(c - 1)] = part;
    }
    layout.out_part.resize(static_cast<std::size_t>(spec.out_plan.padded_size));
    for (Index cdot = 1; cdot <= spec.out_plan.padded_size; ++cdot) {
        std::vector<Index> multi = flat_to_multi(spec.out_plan, cdot);
        Index part = 0;
        for (Index i = 0; i < order; ++i) {
            part += (multi[static_cast<std::size_t>(i)] - 1) *
                    strides[static_cast<std::size_t>(i + 1)];
        }
        layout.out_part[static_cast<std::size_t>(cdot - 1)] = part;
    }
    return layout;
}

} // namespace

TtConvKernel::TtConvKernel(ConvLayerSpec spec, TtCore spatial_core,
                           std::vector<TtMatrixCore> channel_cores, std::vector<double> bias)
        : spec_(std::move(spec)), spatial_core_(std::move(spatial_core)),
          channel_cores_(std::move(channel_cores)), bias_(std::move(bias)) {
    spec_.validate();
    const Index k = spec_.kernel_size;
    if (spatial_core_.left_rank != 1) {
        throw ShapeError("spatial core must have leading rank 1");
    }
    if (spatial_core_.mode_size != k * k) {
        throw ShapeError("spatial core mode size " + std::to_string(spatial_core_.mode_size) +
                         " does not match k^2 = " + std::to_string(k * k));
    }
    if (static_cast<Index>(channel_cores_.size()) != spec_.tt_order()) {
        throw ShapeError("expected " + std::to_string(spec_.tt_order()) + " channel cores, got " +
                         std::to_string(channel_cores_.size()));
    }
    Index rank = spatial_core_.right_rank;
    for (std::size_t i = 0; i < channel_cores_.size(); ++i) {
        const TtMatrixCore& core = channel_cores_[i];
        if (core.left_rank != rank) {
            throw ShapeError("rank mismatch entering channel core " + std::to_string(i + 1) +
                             ": " + std::to_string(core.left_rank) + " vs " +
                             std::to_string(rank));
        }
        if (core.row_size != spec_.in_plan.factors[i]) {
            throw ShapeError("channel core " + std::to_string(i + 1) + " input factor " +
                             std::to_string(core.row_size) + " does not match plan factor " +
                             std::to_string(spec_.in_plan.factors[i]));
        }
        if (core.col_size != spec_.out_plan.factors[i]) {
            throw ShapeError("channel core " + std::to_string(i + 1) + " output factor " +
                             std::to_string(core.col_size) + " does not match plan factor " +
                             std::to_string(spec_.out_plan.factors[i]));
        }
        rank = core.right_rank;
    }
    if (rank != 1) {
        throw ShapeError("trailing boundary rank must be 1, got " + std::to_string(rank));
    }
    if (spec_.has_bias) {
        if (static_cast<Index>(bias_.size()) != spec_.out_channels) {
            throw ShapeError("bias length does not match out_channels");
        }
    } else if (!bias_.empty()) {
        throw ShapeError("bias supplied for a layer declared without bias");
    }
}

std::vector<Index> TtConvKernel::internal_ranks() const {
    std::vector<Index> ranks;
    ranks.reserve(channel_cores_.size());
    for (const TtMatrixCore& core : channel_cores_) ranks.push_back(core.left_rank);
    return ranks;
}

std::uint64_t TtConvKernel::param_count() const {
    std::uint64_t total = static_cast<std::uint64_t>(spatial_core_.size());
    for (const TtMatrixCore& core : channel_cores_) {
        total += static_cast<std::uint64_t>(core.size());
    }
    return total;
}

TtTensor TtConvKernel::as_merged_train() const {
    std::vector<TtCore> cores;
    cores.reserve(channel_cores_.size() + 1);
    cores.push_back(spatial_core_);
    for (const TtMatrixCore& core : channel_cores_) {
        cores.emplace_back(core.left_rank, core.row_size * core.col_size, core.right_rank,
                           core.data);
    }
    return TtTensor(std::move(cores));
}

TtConvKernel decompose_kernel(const DenseConvKernel& kernel, const DecomposeOptions& options) {
    const ConvLayerSpec& spec = kernel.spec();
    spec.validate();
    const Index k = spec.kernel_size;
    const Index order = spec.tt_order();
    const MergedLayout layout = merged_layout(spec);

    DenseTensor merged = DenseTensor::zeros(layout.merged_modes);
    std::span<double> flat = merged.mutable_data();
    for (Index m = 1; m <= k; ++m) {
        for (Index n = 1; n <= k; ++n) {
            const Index s0 = (m - 1) + k * (n - 1);
            for (Index c = 1; c <= spec.in_channels; ++c) {
                for (Index cdot = 1; cdot <= spec.out_channels; ++cdot) {
                    flat[static_cast<std::size_t>(s0 * layout.spatial_stride +
                                                  layout.in_part[static_cast<std::size_t>(c - 1)] +
                                                  layout.out_part[static_cast<std::size_t>(
                                                      cdot - 1)])] = kernel.at(m, n, c, cdot);
                }
            }
        }
    }

    TtTensor train = tt_decompose(merged, options);
    std::vector<TtCore> cores = train.cores();

    TtCore spatial = std::move(cores.front());
    std::vector<TtMatrixCore> channel_cores;
    channel_cores.reserve(static_cast<std::size_t>(order));
    for (Index i = 0; i < order; ++i) {
        TtCore& core = cores[static_cast<std::size_t>(i + 1)];
        channel_cores.emplace_back(core.left_rank, spec.in_plan.factors[static_cast<std::size_t>(i)],
                                   spec.out_plan.factors[static_cast<std::size_t>(i)],
                                   core.right_rank, std::move(core.data));
    }
    std::vector<double> bias(kernel.bias().begin(), kernel.bias().end());
    return TtConvKernel(spec, std::move(spatial), std::move(channel_cores), std::move(bias));
}

TtConvKernel decompose_kernel(const DenseConvKernel& kernel, Index uniform_rank) {
    if (uniform_rank < 1) throw ShapeError("uniform rank must be >= 1");
    DecomposeOptions options;
    options.bond_caps.assign(static_cast<std::size_t>(kernel.spec().tt_order()), uniform_rank);
    return decompose_kernel(kernel, options);
}

DenseConvKernel reconstruct_kernel(const TtConvKernel& kernel, DummyCheck check,
                                   double dummy_tolerance) {
    const ConvLayerSpec& spec = kernel.spec();
    const Index k = spec.kernel_size;
    const MergedLayout layout = merged_layout(spec);

    DenseTensor merged = kernel.as_merged_train().reconstruct();
    std::span<const double> flat = merged.data();

    std::vector<double> weights(static_cast<std::size_t>(spec.dense_param_count()));
    for (Index s0 = 0; s0 < k * k; ++s0) {
        const Index m = s0 % k + 1;
        const Index n = s0 / k + 1;
        for (Index c = 1; c <= spec.in_plan.padded_size; ++c) {
            for (Index cdot = 1; cdot <= spec.out_plan.padded_size; ++cdot) {
                const double value =
                    flat[static_cast<std::size_t>(s0 * layout.spatial_stride +
                                                  layout.in_part[static_cast<std::size_t>(c - 1)] +
                                                  layout.out_part[static_cast<std::size_t>(cdot -
                                                                                           1)])];
                const bool dummy = c > spec.in_channels || cdot > spec.out_channels;
                if (dummy) {
                    if (check == DummyCheck::kStrict && std::abs(value) > dummy_tolerance) {
                        throw IntegrityError(
                            "dummy channel (c=" + std::to_string(c) + ", cdot=" +
                            std::to_string(cdot) + ") reconstructs to " + std::to_string(value) +
                            ", above tolerance " + std::to_string(dummy_tolerance));
                    }
                    continue;
                }
                weights[static_cast<std::size_t>(
                    (((m - 1) * k + (n - 1)) * spec.in_channels + (c - 1)) * spec.out_channels +
                    (cdot - 1))] = value;
            }
        }
    }
    std::vector<double> bias(kernel.bias().begin(), kernel.bias().end());
    return DenseConvKernel(spec, std::move(weights), std::move(bias));
}

FeatureMap tt_conv_forward(const TtConvKernel& kernel, const FeatureMap& input,
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
    const Index positions = out_h * out_w;
    const Index window = k * k;
    const Index padded_in = spec.in_plan.padded_size;
    const Index padded_out = spec.out_plan.padded_size;

    std::uint64_t macs = 0;

    // Patch rows: (position, padded channel, window offset), window fastest.
    // Dummy input channels stay zero.
    std::vector<double> patches(static_cast<std::size_t>(positions * padded_in * window), 0.0);
    for (Index oh = 1; oh <= out_h; ++oh) {
        for (Index ow = 1; ow <= out_w; ++ow) {
            const Index pos = (oh - 1) * out_w + (ow - 1);
            for (Index c = 1; c <= spec.in_channels; ++c) {
                for (Index m = 1; m <= k; ++m) {
                    for (Index n = 1; n <= k; ++n) {
                        const Index s0 = (m - 1) + k * (n - 1);
                        patches[static_cast<std::size_t>((pos * padded_in + (c - 1)) * window +
                                                         s0)] = input.at(oh + m - 1, ow + n - 1, c);
                    }
                }
            }
        }
    }

    // Contract the spatial core over the window mode. The running buffer is
    // laid out (position, remaining input factors, produced output factors,
    // bond rank), row-major with the rank fastest.
    const TtCore& spatial = kernel.spatial_core();
    Index rank_in = spatial.right_rank;
    std::vector<double> buffer(static_cast<std::size_t>(positions * padded_in * rank_in));
    for (Index pos = 0; pos < positions; ++pos) {
        for (Index c = 0; c < padded_in; ++c) {
            const double* patch = &patches[static_cast<std::size_t>((pos * padded_in + c) * window)];
            for (Index r = 0; r < rank_in; ++r) {
                double acc = 0.0;
                for (Index s = 0; s < window; ++s) {
                    acc += patch[s] * spatial.data[static_cast<std::size_t>(s * rank_in + r)];
                    ++macs;
                }
                buffer[static_cast<std::size_t>((pos * padded_in + c) * rank_in + r)] = acc;
            }
        }
    }
    patches.clear();
    patches.shrink_to_fit();

    // Channel cores, left to right. Each step peels the fastest-varying
    // remaining input factor and appends its output factor as the new
    // slowest-produced one, keeping both merged indices little-endian.
    Index remaining = padded_in;
    Index produced = 1;
    for (const TtMatrixCore& core : kernel.channel_cores()) {
        const Index in_factor = core.row_size;
        const Index out_factor = core.col_size;
        const Index rank_out = core.right_rank;
        const Index remaining_next = remaining / in_factor;
        const Index produced_next = produced * out_factor;
        const Index core_rank_stride = in_factor * out_factor * rank_out;

        std::vector<double> next(
            static_cast<std::size_t>(positions * remaining_next * produced_next * rank_out));
        for (Index pos = 0; pos < positions; ++pos) {
            for (Index rem = 0; rem < remaining_next; ++rem) {
                for (Index done = 0; done < produced; ++done) {
                    for (Index p = 0; p < out_factor; ++p) {
                        for (Index ro = 0; ro < rank_out; ++ro) {
                            double acc = 0.0;
                            for (Index q = 0; q < in_factor; ++q) {
                                const std::size_t src = static_cast<std::size_t>(
                                    ((pos * remaining + (rem * in_factor + q)) * produced + done) *
                                    rank_in);
                                const Index wgt = (q * out_factor + p) * rank_out + ro;
                                for (Index ri = 0; ri < rank_in; ++ri) {
                                    acc += buffer[src + static_cast<std::size_t>(ri)] *
                                           core.data[static_cast<std::size_t>(
                                               ri * core_rank_stride + wgt)];
                                    ++macs;
                                }
                            }
                            next[static_cast<std::size_t>(
                                ((pos * remaining_next + rem) * produced_next +
                                 (done + produced * p)) *
                                    rank_out +
                                ro)] = acc;
                        }
                    }
                }
            }
        }
        buffer = std::move(next);
        remaining = remaining_next;
        produced = produced_next;
        rank_in = rank_out;
    }

    // buffer is now (position, padded output channel); drop dummies, add bias.
    FeatureMap out = FeatureMap::zeros(out_h, out_w, spec.out_channels);
    for (Index oh = 1; oh <= out_h; ++oh) {
        for (Index ow = 1; ow <= out_w; ++ow) {
            const Index pos = (oh - 1) * out_w + (ow - 1);
            for (Index cdot = 1; cdot <= spec.out_channels; ++cdot) {
                double value = buffer[static_cast<std::size_t>(pos * padded_out + (cdot - 1))];
                if (spec.has_bias) value += kernel.bias()[static_cast<std::size_t>(cdot - 1)];
                out.at(oh, ow, cdot) = value;
            }
        }
    }
    if (mac_count) *mac_count = macs;
    return out;
}

std::uint64_t tt_conv_macs(const ConvLayerSpec& spec, std::span<const Index> internal_ranks,
                           Index out_height, Index out_width) {
    spec.validate();
    if (static_cast<Index>(internal_ranks.size()) != spec.tt_order()) {
        throw ShapeError("expected " + std::to_string(spec.tt_order()) + " internal ranks, got " +
                         std::to_string(internal_ranks.size()));
    }
    const std::uint64_t positions =
        static_cast<std::uint64_t>(out_height) * static_cast<std::uint64_t>(out_width);
    const std::uint64_t window = static_cast<std::uint64_t>(spec.kernel_size) *
                                 static_cast<std::uint64_t>(spec.kernel_size);

    std::uint64_t macs = positions * static_cast<std::uint64_t>(spec.in_plan.padded_size) *
                         window * static_cast<std::uint64_t>(internal_ranks[0]);

    std::uint64_t remaining = static_cast<std::uint64_t>(spec.in_plan.padded_size);
    std::uint64_t produced = 1;
    for (Index i = 0; i < spec.tt_order(); ++i) {
        const std::uint64_t in_factor =
            static_cast<std::uint64_t>(spec.in_plan.factors[static_cast<std::size_t>(i)]);
        const std::uint64_t out_factor =
            static_cast<std::uint64_t>(spec.out_plan.factors[static_cast<std::size_t>(i)]);
        const std::uint64_t rank_in = static_cast<std::uint64_t>(internal_ranks[static_cast<std::size_t>(i)]);
        const std::uint64_t rank_out =
            i + 1 < spec.tt_order()
                ? static_cast<std::uint64_t>(internal_ranks[static_cast<std::size_t>(i + 1)])
                : 1;
        const std::uint64_t remaining_next = remaining / in_factor;
        const std::uint64_t produced_next = produced * out_factor;
        macs += positions * remaining_next * produced * out_factor * rank_out * in_factor * rank_in;
        remaining = remaining_next;
        produced = produced_next;
    }
    return macs;
}

} // namespace ttconv
