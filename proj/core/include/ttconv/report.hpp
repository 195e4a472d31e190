// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ttconv/compress.hpp"

namespace ttconv {

enum class ReportFormat {
    kTable, ///< human-readable fixed-width table
    kJsonl, ///< one self-describing JSON object per line
};

/// Renders one compression report. Ratios print to 4 significant figures in
/// table mode; JSONL rows carry the full doubles. Output is deterministic
/// for identical reports.
std::string render_report(const CompressionReport& report, ReportFormat format);

/// Combined table over a rank sweep: one line per rank with selected-layer
/// parameters, compression rate, and MAC totals, plus a footer quoting the
/// externally reported reference compression rates these sweeps approximate.
std::string render_sweep(const std::vector<CompressionReport>& reports, ReportFormat format);

} // namespace ttconv
