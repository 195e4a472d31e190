// SPDX-License-Identifier: Apache-2.0
#include "ttconv/dense_tensor.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ttconv {

Index shape_product(std::span<const Index> shape) {
    Index product = 1;
    for (Index extent : shape) {
        if (extent < 1) {
            throw ShapeError("dimension sizes must be >= 1, got " + std::to_string(extent));
        }
        if (product > std::numeric_limits<Index>::max() / extent) {
            throw CapacityError("shape product overflows 64-bit index");
        }
        product *= extent;
    }
    return product;
}

DenseTensor::DenseTensor(std::vector<Index> shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) {
        throw ShapeError("tensor shape must have at least one mode");
    }
    Index expected = shape_product(shape_);
    if (expected != static_cast<Index>(data_.size())) {
        throw ShapeError("data length " + std::to_string(data_.size()) +
                         " does not match shape product " + std::to_string(expected));
    }
}

DenseTensor DenseTensor::zeros(std::vector<Index> shape) {
    Index count = shape_product(shape);
    return DenseTensor(std::move(shape), std::vector<double>(static_cast<std::size_t>(count), 0.0));
}

Index DenseTensor::flat_offset(std::span<const Index> index) const {
    if (index.size() != shape_.size()) {
        throw RangeError("multi-index has " + std::to_string(index.size()) +
                         " components, tensor has " + std::to_string(shape_.size()) + " modes");
    }
    Index offset = 0;
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (index[i] < 1 || index[i] > shape_[i]) {
            throw RangeError("index " + std::to_string(index[i]) + " out of range for mode " +
                             std::to_string(i + 1) + " (size " + std::to_string(shape_[i]) + ")");
        }
        offset = offset * shape_[i] + (index[i] - 1);
    }
    return offset;
}

double DenseTensor::frobenius_norm() const {
    double sum = 0.0;
    for (double v : data_) sum += v * v;
    return std::sqrt(sum);
}

bool DenseTensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

} // namespace ttconv
