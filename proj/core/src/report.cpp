// SPDX-License-Identifier: Apache-2.0
#include "ttconv/report.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace ttconv {

namespace {

std::string sig4(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", value);
    return buf;
}

std::string sci(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3e", value);
    return buf;
}

std::string rank_list(const std::vector<Index>& ranks) {
    if (ranks.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(ranks[i]);
    }
    return out;
}

nlohmann::ordered_json row_json(const LayerReportRow& row) {
    nlohmann::ordered_json j;
    j["record"] = "layer";
    j["layer_id"] = row.layer_id;
    j["selected"] = row.selected;
    j["kernel"] = row.kernel_size;
    j["in_channels"] = row.in_channels;
    j["out_channels"] = row.out_channels;
    j["dense_params"] = row.dense_params;
    j["tt_params"] = row.tt_params;
    j["ratio"] = row.ratio;
    j["dense_macs"] = row.dense_macs;
    j["tt_macs"] = row.tt_macs;
    j["ranks"] = row.ranks;
    if (row.recon_error) {
        j["recon_error"] = *row.recon_error;
    } else {
        j["recon_error"] = nullptr;
    }
    return j;
}

nlohmann::ordered_json summary_json(const CompressionReport& report) {
    nlohmann::ordered_json j;
    j["record"] = "summary";
    j["setting"] = report.setting.label();
    j["selected_dense_params"] = report.selected_dense_params;
    j["selected_tt_params"] = report.selected_tt_params;
    j["overall_ratio"] = report.overall_ratio;
    j["total_dense_macs"] = report.total_dense_macs;
    j["total_tt_macs"] = report.total_tt_macs;
    if (report.weighted_recon_error) {
        j["weighted_recon_error"] = *report.weighted_recon_error;
    } else {
        j["weighted_recon_error"] = nullptr;
    }
    return j;
}

} // namespace

std::string render_report(const CompressionReport& report, ReportFormat format) {
    if (format == ReportFormat::kJsonl) {
        std::string out;
        for (const LayerReportRow& row : report.rows) {
            out += row_json(row).dump();
            out += "\n";
        }
        out += summary_json(report).dump();
        out += "\n";
        return out;
    }

    std::string out = "compression report (" + report.setting.label() + ")\n";
    char line[320];
    std::snprintf(line, sizeof(line), "%-24s %-4s %-12s %12s %12s %10s %14s %14s %11s %s\n",
                  "layer", "sel", "shape", "dense_par", "tt_par", "ratio", "dense_macs", "tt_macs",
                  "recon_err", "ranks");
    out += line;
    for (const LayerReportRow& row : report.rows) {
        const std::string shape = std::to_string(row.kernel_size) + "x" +
                                  std::to_string(row.kernel_size) + "x" +
                                  std::to_string(row.in_channels) + ">" +
                                  std::to_string(row.out_channels);
        std::snprintf(line, sizeof(line),
                      "%-24s %-4s %-12s %12llu %12llu %10s %14llu %14llu %11s %s\n",
                      row.layer_id.c_str(), row.selected ? "yes" : "no", shape.c_str(),
                      static_cast<unsigned long long>(row.dense_params),
                      static_cast<unsigned long long>(row.tt_params), sig4(row.ratio).c_str(),
                      static_cast<unsigned long long>(row.dense_macs),
                      static_cast<unsigned long long>(row.tt_macs),
                      row.recon_error ? sci(*row.recon_error).c_str() : "-",
                      rank_list(row.ranks).c_str());
        out += line;
    }
    std::snprintf(line, sizeof(line),
                  "selected layers: %llu dense params -> %llu tt params, ratio %s\n",
                  static_cast<unsigned long long>(report.selected_dense_params),
                  static_cast<unsigned long long>(report.selected_tt_params),
                  sig4(report.overall_ratio).c_str());
    out += line;
    std::snprintf(line, sizeof(line), "all layers: %llu dense MACs vs %llu tt MACs\n",
                  static_cast<unsigned long long>(report.total_dense_macs),
                  static_cast<unsigned long long>(report.total_tt_macs));
    out += line;
    if (report.weighted_recon_error) {
        out += "weighted reconstruction error: " + sci(*report.weighted_recon_error) + "\n";
    }
    return out;
}

std::string render_sweep(const std::vector<CompressionReport>& reports, ReportFormat format) {
    if (format == ReportFormat::kJsonl) {
        std::string out;
        for (const CompressionReport& report : reports) {
            out += summary_json(report).dump();
            out += "\n";
        }
        return out;
    }

    std::string out = "rank sweep\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-10s %16s %16s %10s %16s %16s\n", "setting",
                  "sel_dense_par", "sel_tt_par", "ratio", "dense_macs", "tt_macs");
    out += line;
    for (const CompressionReport& report : reports) {
        std::snprintf(line, sizeof(line), "%-10s %16llu %16llu %10s %16llu %16llu\n",
                      report.setting.label().c_str(),
                      static_cast<unsigned long long>(report.selected_dense_params),
                      static_cast<unsigned long long>(report.selected_tt_params),
                      sig4(report.overall_ratio).c_str(),
                      static_cast<unsigned long long>(report.total_dense_macs),
                      static_cast<unsigned long long>(report.total_tt_macs));
        out += line;
    }
    out += "reference: published selected-layer results for a trained YOLOv5s-style selection\n"
           "report 101.4K/25.9K/6.73K/1.81K parameters (24x/95x/367x/1363x) at ranks 16/8/4/2.\n"
           "The bundled manifest approximates that undisclosed layer selection, so measured\n"
           "ratios are comparable in trend, not in value.\n";
    return out;
}

} // namespace ttconv
