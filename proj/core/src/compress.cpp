// SPDX-License-Identifier: Apache-2.0
#include "ttconv/compress.hpp"

#include <cmath>
#include <cstdio>

namespace ttconv {

namespace {

double relative_error(const DenseConvKernel& reference, const DenseConvKernel& reconstructed) {
    double diff = 0.0;
    double norm = 0.0;
    std::span<const double> a = reference.weights();
    std::span<const double> b = reconstructed.weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        diff += d * d;
        norm += a[i] * a[i];
    }
    if (norm == 0.0) return 0.0; // a zero layer is perfectly representable
    return std::sqrt(diff / norm);
}

LayerReportRow make_row(const ManifestLayer& layer, const CompressedLayer& compressed,
                        std::optional<double> recon_error) {
    const ConvLayerSpec& spec = layer.spec;
    LayerReportRow row;
    row.layer_id = layer.id;
    row.selected = layer.selected;
    row.kernel_size = spec.kernel_size;
    row.in_channels = spec.in_channels;
    row.out_channels = spec.out_channels;
    row.dense_params = spec.dense_param_count();
    const Index out_h = layer.input_height - spec.kernel_size + 1;
    const Index out_w = layer.input_width - spec.kernel_size + 1;
    row.dense_macs = dense_conv_macs(spec, out_h, out_w);
    if (compressed.is_tt()) {
        row.tt_params = compressed.tt().param_count();
        row.ranks = compressed.tt().internal_ranks();
        row.tt_macs = tt_conv_macs(spec, row.ranks, out_h, out_w);
    } else {
        row.tt_params = row.dense_params;
        row.tt_macs = row.dense_macs;
    }
    row.ratio = static_cast<double>(row.dense_params) / static_cast<double>(row.tt_params);
    row.recon_error = recon_error;
    return row;
}

CompressionReport assemble_report(const CompressedModel& model,
                                  const std::vector<std::optional<double>>& recon_errors) {
    CompressionReport report;
    report.setting = model.setting;
    std::uint64_t weighted_num = 0;
    double weighted_sum = 0.0;
    bool any_error = false;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        const ManifestLayer& layer = model.manifest.layers[i];
        LayerReportRow row = make_row(layer, model.layers[i], recon_errors[i]);
        if (row.selected) {
            report.selected_dense_params += row.dense_params;
            report.selected_tt_params += row.tt_params;
        }
        report.total_dense_macs += row.dense_macs;
        report.total_tt_macs += row.tt_macs;
        if (row.recon_error) {
            any_error = true;
            weighted_sum += *row.recon_error * static_cast<double>(row.dense_params);
            weighted_num += row.dense_params;
        }
        report.rows.push_back(std::move(row));
    }
    report.overall_ratio =
        report.selected_tt_params == 0
            ? 1.0
            : static_cast<double>(report.selected_dense_params) /
                  static_cast<double>(report.selected_tt_params);
    if (report.selected_dense_params == 0) report.overall_ratio = 1.0;
    if (any_error && weighted_num > 0) {
        report.weighted_recon_error = weighted_sum / static_cast<double>(weighted_num);
    }
    return report;
}

} // namespace

const ConvLayerSpec& CompressedLayer::spec() const {
    return is_tt() ? tt().spec() : dense().spec();
}

std::string RankSetting::label() const {
    if (tolerance) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "tol=%.3g", *tolerance);
        return buf;
    }
    return "rank " + std::to_string(uniform_rank);
}

WeightsSource WeightsSource::synthetic(std::uint64_t seed) {
    WeightsSource source;
    source.seed_ = seed;
    return source;
}

WeightsSource WeightsSource::from_file(const std::filesystem::path& blob_path) {
    WeightsSource source;
    source.file_ = std::make_shared<DenseWeightsFile>(DenseWeightsFile::load(blob_path));
    return source;
}

DenseConvKernel WeightsSource::kernel_for(const ManifestLayer& layer) const {
    if (file_) return file_->kernel_for(layer);
    return synthetic_kernel(layer.spec, derive_seed(seed_, layer.id));
}

CompressResult compress_network(const NetworkManifest& manifest, const WeightsSource& source,
                                const RankSetting& setting) {
    if (!setting.tolerance && setting.uniform_rank < 1) {
        throw ValidationError("rank must be >= 1, got " + std::to_string(setting.uniform_rank));
    }
    if (setting.tolerance && !(*setting.tolerance > 0.0 && *setting.tolerance < 1.0)) {
        throw ValidationError("tolerance must lie in (0, 1)");
    }

    CompressedModel model;
    model.manifest = manifest;
    model.setting = setting;

    std::vector<std::optional<double>> recon_errors;
    std::vector<std::string> failures;
    for (const ManifestLayer& layer : manifest.layers) {
        try {
            DenseConvKernel dense = source.kernel_for(layer);
            if (layer.selected) {
                TtConvKernel tt =
                    setting.tolerance
                        ? decompose_kernel(dense,
                                           DecomposeOptions{.bond_caps = {},
                                                            .tolerance = setting.tolerance})
                        : decompose_kernel(dense, setting.uniform_rank);
                recon_errors.push_back(
                    relative_error(dense, reconstruct_kernel(tt, DummyCheck::kSkip)));
                model.layers.push_back(CompressedLayer{layer.id, true, std::move(tt)});
            } else {
                recon_errors.push_back(0.0); // pass-through is exact
                model.layers.push_back(CompressedLayer{layer.id, false, std::move(dense)});
            }
        } catch (const Error& e) {
            failures.push_back("layer '" + layer.id + "': " + e.what());
        }
    }
    if (!failures.empty()) {
        std::string message = "compression failed for " + std::to_string(failures.size()) +
                              " layer(s):";
        for (const std::string& f : failures) message += "\n  - " + f;
        throw ValidationError(message);
    }

    CompressResult result;
    result.report = assemble_report(model, recon_errors);
    result.model = std::move(model);
    return result;
}

std::vector<CompressionReport> rank_sweep(const NetworkManifest& manifest,
                                          const WeightsSource& source,
                                          const std::vector<Index>& ranks) {
    if (ranks.empty()) throw ValidationError("rank sweep needs at least one rank");
    std::vector<CompressionReport> reports;
    reports.reserve(ranks.size());
    for (Index rank : ranks) {
        reports.push_back(
            compress_network(manifest, source, RankSetting{.uniform_rank = rank, .tolerance = std::nullopt}).report);
    }
    return reports;
}

ReconstructionErrorReport reconstruction_error_report(const CompressedModel& model,
                                                      const WeightsSource& source) {
    std::vector<std::string> problems;
    ReconstructionErrorReport report;
    std::uint64_t weight_total = 0;
    double weighted_sum = 0.0;
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        const ManifestLayer& layer = model.manifest.layers[i];
        try {
            DenseConvKernel reference = source.kernel_for(layer);
            DenseConvKernel reconstructed =
                model.layers[i].is_tt() ? reconstruct_kernel(model.layers[i].tt(), DummyCheck::kSkip)
                                        : model.layers[i].dense();
            const double error = relative_error(reference, reconstructed);
            report.layers.push_back(LayerError{layer.id, error});
            weighted_sum += error * static_cast<double>(layer.spec.dense_param_count());
            weight_total += layer.spec.dense_param_count();
        } catch (const Error& e) {
            problems.push_back("layer '" + layer.id + "': " + e.what());
        }
    }
    if (!problems.empty()) {
        std::string message = "reconstruction error report failed:";
        for (const std::string& p : problems) message += "\n  - " + p;
        throw ValidationError(message);
    }
    report.weighted_error =
        weight_total == 0 ? 0.0 : weighted_sum / static_cast<double>(weight_total);
    return report;
}

CompressionReport report_for_model(const CompressedModel& model, const WeightsSource* source) {
    std::vector<std::optional<double>> recon_errors(model.layers.size());
    if (source) {
        ReconstructionErrorReport errors = reconstruction_error_report(model, *source);
        for (std::size_t i = 0; i < errors.layers.size(); ++i) {
            recon_errors[i] = errors.layers[i].relative_error;
        }
    }
    return assemble_report(model, recon_errors);
}

} // namespace ttconv
