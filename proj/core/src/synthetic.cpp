// SPDX-License-Identifier: Apache-2.0
#include "ttconv/synthetic.hpp"

#include <cmath>
#include <numbers>

namespace ttconv {

namespace {

// splitmix64; also used to seed the main generator.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (char ch : text) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

} // namespace

NormalSampler::NormalSampler(std::uint64_t seed) : state_(mix(seed)) {}

std::uint64_t NormalSampler::raw() {
    // xorshift64*; small, fully specified, good enough for test weights.
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dull;
}

double NormalSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on uniforms built from the top 53 bits.
    const double u1 = (static_cast<double>(raw() >> 11) + 1.0) * 0x1p-53; // (0, 1]
    const double u2 = static_cast<double>(raw() >> 11) * 0x1p-53;         // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    return mix(seed ^ fnv1a(tag));
}

DenseConvKernel synthetic_kernel(const ConvLayerSpec& spec, std::uint64_t seed) {
    NormalSampler sampler(seed);
    const double sigma = 1.0 / std::sqrt(static_cast<double>(spec.kernel_size * spec.kernel_size *
                                                             spec.in_channels));
    std::vector<double> weights(static_cast<std::size_t>(spec.dense_param_count()));
    for (double& w : weights) w = sampler.next(sigma);
    std::vector<double> bias;
    if (spec.has_bias) {
        bias.resize(static_cast<std::size_t>(spec.out_channels));
        for (double& b : bias) b = sampler.next(0.1);
    }
    return DenseConvKernel(spec, std::move(weights), std::move(bias));
}

FeatureMap synthetic_feature_map(Index height, Index width, Index channels, std::uint64_t seed) {
    NormalSampler sampler(seed);
    std::vector<double> data(static_cast<std::size_t>(height * width * channels));
    for (double& v : data) v = sampler.next();
    return FeatureMap(height, width, channels, std::move(data));
}

} // namespace ttconv
