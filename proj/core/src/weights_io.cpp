// SPDX-License-Identifier: Apache-2.0
#include "ttconv/weights_io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

namespace ttconv {

namespace {

static_assert(std::endian::native == std::endian::little,
              "weight blobs are little-endian; big-endian hosts need byte swaps");

std::vector<float> read_blob(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary | std::ios::ate);
    if (!stream) throw IoError("cannot open weights file '" + path.string() + "'");
    const std::streamsize bytes = stream.tellg();
    if (bytes % 4 != 0) {
        throw CorruptionError("weights file '" + path.string() +
                              "' size is not a multiple of 4 bytes");
    }
    std::vector<float> blob(static_cast<std::size_t>(bytes / 4));
    stream.seekg(0);
    stream.read(reinterpret_cast<char*>(blob.data()), bytes);
    if (!stream) throw IoError("failed reading weights file '" + path.string() + "'");
    return blob;
}

} // namespace

DenseWeightsFile DenseWeightsFile::load(const std::filesystem::path& blob_path) {
    DenseWeightsFile file;
    file.blob_ = read_blob(blob_path);

    std::filesystem::path index_path = blob_path;
    index_path += ".idx";
    std::ifstream stream(index_path);
    if (!stream) throw IoError("cannot open weights index '" + index_path.string() + "'");

    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        WeightsIndexEntry entry;
        if (!(fields >> entry.layer_id)) continue; // blank line
        if (!(fields >> entry.offset_floats >> entry.weight_count >> entry.bias_count)) {
            throw ParseError(index_path.string() + ":" + std::to_string(line_no) +
                             ": expected '<layer_id> <offset> <weights> <bias>'");
        }
        const std::uint64_t end = entry.offset_floats + entry.weight_count + entry.bias_count;
        if (end > file.blob_.size()) {
            throw CorruptionError(index_path.string() + ":" + std::to_string(line_no) +
                                  ": entry extends past the end of the blob");
        }
        file.entries_.push_back(std::move(entry));
    }
    return file;
}

const WeightsIndexEntry* DenseWeightsFile::find(std::string_view layer_id) const {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const WeightsIndexEntry& e) { return e.layer_id == layer_id; });
    return it == entries_.end() ? nullptr : &*it;
}

DenseConvKernel DenseWeightsFile::kernel_for(const ManifestLayer& layer) const {
    const WeightsIndexEntry* entry = find(layer.id);
    if (!entry) {
        throw ShapeError("weights file has no entry for layer '" + layer.id + "'");
    }
    const std::uint64_t expected_weights = layer.spec.dense_param_count();
    const std::uint64_t expected_bias =
        layer.spec.has_bias ? static_cast<std::uint64_t>(layer.spec.out_channels) : 0;
    if (entry->weight_count != expected_weights || entry->bias_count != expected_bias) {
        throw ShapeError("layer '" + layer.id + "': weights file provides " +
                         std::to_string(entry->weight_count) + "+" +
                         std::to_string(entry->bias_count) + " floats, layer needs " +
                         std::to_string(expected_weights) + "+" + std::to_string(expected_bias));
    }
    std::vector<double> weights(entry->weight_count);
    for (std::uint64_t i = 0; i < entry->weight_count; ++i) {
        weights[i] = static_cast<double>(blob_[entry->offset_floats + i]);
    }
    std::vector<double> bias(entry->bias_count);
    for (std::uint64_t i = 0; i < entry->bias_count; ++i) {
        bias[i] = static_cast<double>(blob_[entry->offset_floats + entry->weight_count + i]);
    }
    return DenseConvKernel(layer.spec, std::move(weights), std::move(bias));
}

void save_dense_weights(const std::vector<std::pair<std::string, DenseConvKernel>>& kernels,
                        const std::filesystem::path& blob_path) {
    std::vector<float> blob;
    std::string index_text = "# layer_id offset_floats weight_count bias_count\n";
    for (const auto& [id, kernel] : kernels) {
        const std::uint64_t offset = blob.size();
        for (double w : kernel.weights()) blob.push_back(static_cast<float>(w));
        for (double b : kernel.bias()) blob.push_back(static_cast<float>(b));
        index_text += id + " " + std::to_string(offset) + " " +
                      std::to_string(kernel.weights().size()) + " " +
                      std::to_string(kernel.bias().size()) + "\n";
    }

    std::ofstream out(blob_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write weights file '" + blob_path.string() + "'");
    out.write(reinterpret_cast<const char*>(blob.data()),
              static_cast<std::streamsize>(blob.size() * 4));
    if (!out) throw IoError("failed writing weights file '" + blob_path.string() + "'");
    out.close();

    std::filesystem::path index_path = blob_path;
    index_path += ".idx";
    std::ofstream index(index_path, std::ios::binary | std::ios::trunc);
    if (!index) throw IoError("cannot write weights index '" + index_path.string() + "'");
    index << index_text;
    if (!index) throw IoError("failed writing weights index '" + index_path.string() + "'");
}

} // namespace ttconv
