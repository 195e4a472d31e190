// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

#include "ttconv/conv.hpp"

namespace ttconv {

/// Deterministic standard-normal sampler (mt19937_64 + Box-Muller with the
/// uniform mapping spelled out here), so identical seeds give identical
/// streams on every build of this library.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed);

    double next();
    /// next() scaled by sigma.
    double next(double sigma) { return next() * sigma; }

private:
    std::uint64_t state_;
    std::uint64_t raw();
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Stable per-layer seed: mixes the run seed with a hash of the layer id so
/// layer order does not matter.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

/// Random kernel with weights ~ N(0, 1/(k^2 * C)) and, when the layer has
/// one, bias ~ N(0, 0.01).
DenseConvKernel synthetic_kernel(const ConvLayerSpec& spec, std::uint64_t seed);

/// Random feature map with unit-normal entries.
FeatureMap synthetic_feature_map(Index height, Index width, Index channels, std::uint64_t seed);

} // namespace ttconv
