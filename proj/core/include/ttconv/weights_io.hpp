// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ttconv/conv.hpp"
#include "ttconv/manifest.hpp"

namespace ttconv {

/// One sidecar index line: where a layer's floats live inside the blob.
/// Weights occupy [offset_floats, offset_floats + weight_count); bias floats,
/// when present, follow the weights immediately.
struct WeightsIndexEntry {
    std::string layer_id;
    std::uint64_t offset_floats = 0;
    std::uint64_t weight_count = 0;
    std::uint64_t bias_count = 0;
};

/// Reader over a flat little-endian float32 blob plus its "<blob>.idx"
/// sidecar. Per layer the weights are row-major over (m, n, c, c-dot) with
/// the output channel fastest — the same order DenseConvKernel stores.
class DenseWeightsFile {
public:
    static DenseWeightsFile load(const std::filesystem::path& blob_path);

    const std::vector<WeightsIndexEntry>& entries() const { return entries_; }
    const WeightsIndexEntry* find(std::string_view layer_id) const;

    /// Materializes the layer's kernel; throws ShapeError when the index
    /// entry disagrees with the layer spec.
    DenseConvKernel kernel_for(const ManifestLayer& layer) const;

private:
    std::vector<float> blob_;
    std::vector<WeightsIndexEntry> entries_;
};

/// Writes blob + sidecar for the given kernels, laid out in order.
void save_dense_weights(const std::vector<std::pair<std::string, DenseConvKernel>>& kernels,
                        const std::filesystem::path& blob_path);

} // namespace ttconv
