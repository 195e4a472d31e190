// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "ttconv/compress.hpp"

namespace ttconv {

/// Binary model container, format "TTCV" version 1, little-endian:
///
///   magic "TTCV" | u16 version | u16 reserved | u32 section_count
///   section table: { char tag[4], u32 crc32, u64 offset, u64 size } each
///   payloads at the recorded offsets
///
/// Sections (in order): MANI — canonical manifest text; LAYR — per-layer
/// storage kind and TT ranks; CORE — float32 core payloads (TT layers:
/// spatial core then channel cores; pass-through layers: the dense weights);
/// BIAS — float32 biases for layers that have one.
///
/// save_model is deterministic: identical models produce identical bytes.
/// The file is written to "<path>.tmp" and renamed, so a failed save leaves
/// no partial file behind.
void save_model(const CompressedModel& model, const std::filesystem::path& path);

/// Validates magic, version, section bounds and per-section CRC-32 before
/// decoding; checksum failures raise CorruptionError naming the section,
/// unsupported versions raise VersionError. Rank-chain and plan-product
/// consistency are re-validated while rebuilding the kernels.
CompressedModel load_model(const std::filesystem::path& path);

} // namespace ttconv
