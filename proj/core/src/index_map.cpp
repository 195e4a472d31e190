// SPDX-License-Identifier: Apache-2.0
#include "ttconv/index_map.hpp"

#include <limits>
#include <string>

namespace ttconv {

namespace {

FactorizationPlan make_plan(Index size, std::vector<Index> factors) {
    FactorizationPlan plan;
    plan.logical_size = size;
    plan.padded_size = shape_product(factors);
    plan.factors = std::move(factors);
    plan.pad_count = plan.padded_size - size;
    return plan;
}

} // namespace

FactorizationPlan plan_balanced(Index size, Index order) {
    if (size < 1) throw PlanError("dimension size must be >= 1, got " + std::to_string(size));
    if (order < 1) throw PlanError("factor count must be >= 1, got " + std::to_string(order));

    std::vector<Index> best;
    Index best_product = std::numeric_limits<Index>::max();

    // Candidate tuples are (f, ..., f, f+1, ..., f+1); for each base f the
    // smallest j with f^(order-j) * (f+1)^j >= size gives that base's best.
    for (Index base = 1;; ++base) {
        for (Index j = 0; j <= order; ++j) {
            Index product = 1;
            bool overflow = false;
            for (Index i = 0; i < order; ++i) {
                Index factor = (i < order - j) ? base : base + 1;
                if (product > std::numeric_limits<Index>::max() / factor) {
                    overflow = true;
                    break;
                }
                product *= factor;
            }
            if (overflow) break;
            if (product >= size) {
                std::vector<Index> tuple(static_cast<std::size_t>(order), base);
                for (Index i = order - j; i < order; ++i) tuple[static_cast<std::size_t>(i)] = base + 1;
                if (product < best_product || (product == best_product && tuple < best)) {
                    best_product = product;
                    best = std::move(tuple);
                }
                break;
            }
        }
        // Once f^order >= size, larger bases only grow the product.
        Index pure = 1;
        bool saturated = true;
        for (Index i = 0; i < order; ++i) {
            if (pure > std::numeric_limits<Index>::max() / base) break;
            pure *= base;
            if (i == order - 1 && pure < size) saturated = false;
        }
        if (saturated) break;
    }
    return make_plan(size, std::move(best));
}

FactorizationPlan plan_explicit(Index size, std::vector<Index> factors) {
    if (size < 1) throw PlanError("dimension size must be >= 1, got " + std::to_string(size));
    if (factors.empty()) throw PlanError("explicit factor list must be non-empty");
    for (Index f : factors) {
        if (f < 1) throw PlanError("factors must be >= 1, got " + std::to_string(f));
    }
    Index product = shape_product(factors);
    if (product < size) {
        throw PlanError("explicit factor product " + std::to_string(product) +
                        " is smaller than dimension size " + std::to_string(size));
    }
    return make_plan(size, std::move(factors));
}

std::vector<Index> flat_to_multi(const FactorizationPlan& plan, Index flat) {
    if (flat < 1 || flat > plan.padded_size) {
        throw RangeError("flat index " + std::to_string(flat) + " out of range [1, " +
                         std::to_string(plan.padded_size) + "]");
    }
    std::vector<Index> multi(plan.factors.size());
    Index rest = flat - 1;
    for (std::size_t i = 0; i < plan.factors.size(); ++i) {
        multi[i] = rest % plan.factors[i] + 1;
        rest /= plan.factors[i];
    }
    return multi;
}

Index multi_to_flat(const FactorizationPlan& plan, std::span<const Index> multi) {
    if (multi.size() != plan.factors.size()) {
        throw RangeError("multi-index has " + std::to_string(multi.size()) +
                         " components, plan has " + std::to_string(plan.factors.size()));
    }
    Index flat = 0;
    Index stride = 1;
    for (std::size_t i = 0; i < plan.factors.size(); ++i) {
        if (multi[i] < 1 || multi[i] > plan.factors[i]) {
            throw RangeError("component " + std::to_string(i + 1) + " value " +
                             std::to_string(multi[i]) + " out of range [1, " +
                             std::to_string(plan.factors[i]) + "]");
        }
        flat += (multi[i] - 1) * stride;
        stride *= plan.factors[i];
    }
    return flat + 1;
}

} // namespace ttconv
