// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ttconv/conv.hpp"

namespace ttconv {

inline constexpr std::string_view kManifestSchema = "ttconv-manifest/1";

/// One convolution layer as declared in a manifest.
struct ManifestLayer {
    std::string id;
    ConvLayerSpec spec;
    bool selected = false;
    Index input_height = 0;
    Index input_width = 0;
    /// True when the manifest spelled out the factor lists instead of relying
    /// on the balanced strategy.
    bool explicit_factors = false;
};

/// Ordered layer list plus the network-wide defaults.
struct NetworkManifest {
    std::string name;
    Index default_order = 4;
    FactorStrategy strategy = FactorStrategy::kBalanced;
    std::vector<ManifestLayer> layers;

    const ManifestLayer* find_layer(std::string_view id) const;
};

/// Parses and validates manifest text. Parse failures carry line/field
/// diagnostics; validation failures list every violation found, not just the
/// first. `source_name` labels the diagnostics (usually the file path).
NetworkManifest parse_manifest(std::string_view text, std::string_view source_name);

/// parse_manifest over a file.
NetworkManifest load_manifest(const std::filesystem::path& path);

/// Canonical text form. All factorization plans are pinned explicitly so the
/// output reparses to an identical manifest; the render is deterministic.
std::string render_manifest(const NetworkManifest& manifest);

} // namespace ttconv
