// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "ttconv/manifest.hpp"
#include "ttconv/synthetic.hpp"
#include "ttconv/tt_conv.hpp"
#include "ttconv/weights_io.hpp"

namespace ttconv {

/// Where a layer's dense weights come from: a weights file or a seeded
/// synthetic generator (so every command runs without a checkpoint).
class WeightsSource {
public:
    static WeightsSource synthetic(std::uint64_t seed);
    static WeightsSource from_file(const std::filesystem::path& blob_path);

    bool file_backed() const { return file_ != nullptr; }
    DenseConvKernel kernel_for(const ManifestLayer& layer) const;

private:
    WeightsSource() = default;
    std::uint64_t seed_ = 0;
    std::shared_ptr<const DenseWeightsFile> file_;
};

/// One layer of a compressed network: TT cores for selected layers, the
/// untouched dense kernel otherwise.
struct CompressedLayer {
    std::string id;
    bool selected = false;
    std::variant<TtConvKernel, DenseConvKernel> payload;

    bool is_tt() const { return std::holds_alternative<TtConvKernel>(payload); }
    const TtConvKernel& tt() const { return std::get<TtConvKernel>(payload); }
    const DenseConvKernel& dense() const { return std::get<DenseConvKernel>(payload); }
    const ConvLayerSpec& spec() const;
};

/// The rank (or tolerance) a compression run was asked for.
struct RankSetting {
    Index uniform_rank = 0;            // 0 when tolerance-driven
    std::optional<double> tolerance;

    std::string label() const;
};

struct CompressedModel {
    NetworkManifest manifest;
    RankSetting setting;
    std::vector<CompressedLayer> layers;
};

/// Per-layer report row. MAC counts use the layer's manifest input extent;
/// unselected layers carry their dense figures in both columns.
struct LayerReportRow {
    std::string layer_id;
    bool selected = false;
    Index kernel_size = 0;
    Index in_channels = 0;
    Index out_channels = 0;
    std::uint64_t dense_params = 0;
    std::uint64_t tt_params = 0;
    double ratio = 1.0;
    std::uint64_t dense_macs = 0;
    std::uint64_t tt_macs = 0;
    std::vector<Index> ranks;
    std::optional<double> recon_error;
};

/// Parameter aggregates cover the selected layers (mirroring a
/// selected-layer compression-rate column); MAC aggregates cover every
/// manifest layer, with unselected layers contributing their dense count to
/// both modes.
struct CompressionReport {
    RankSetting setting;
    std::vector<LayerReportRow> rows;
    std::uint64_t selected_dense_params = 0;
    std::uint64_t selected_tt_params = 0;
    double overall_ratio = 1.0; // 1 when nothing is selected
    std::uint64_t total_dense_macs = 0;
    std::uint64_t total_tt_macs = 0;
    std::optional<double> weighted_recon_error;
};

struct CompressResult {
    CompressedModel model;
    CompressionReport report;
};

/// Compresses every selected layer at the given uniform rank (or tolerance);
/// unselected layers pass through untouched and appear in the report with
/// ratio 1. Per-layer weight-shape failures are aggregated into one
/// ValidationError listing all of them.
CompressResult compress_network(const NetworkManifest& manifest, const WeightsSource& source,
                                const RankSetting& setting);

/// One report per rank, in the given order; all runs share the weights
/// source.
std::vector<CompressionReport> rank_sweep(const NetworkManifest& manifest,
                                          const WeightsSource& source,
                                          const std::vector<Index>& ranks);

/// Per-layer relative Frobenius reconstruction errors against reference
/// dense weights, plus the parameter-weighted aggregate. A zero-norm
/// reference layer reports error 0. Missing/extra layers raise
/// ValidationError listing them.
struct LayerError {
    std::string layer_id;
    double relative_error = 0.0;
};
struct ReconstructionErrorReport {
    std::vector<LayerError> layers;
    double weighted_error = 0.0;
};
ReconstructionErrorReport reconstruction_error_report(const CompressedModel& model,
                                                      const WeightsSource& source);

/// Recomputes a report for an existing model (e.g. one loaded from disk).
/// Reconstruction errors are filled when a weights source is supplied.
CompressionReport report_for_model(const CompressedModel& model,
                                   const WeightsSource* source = nullptr);

} // namespace ttconv
