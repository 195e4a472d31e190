// SPDX-License-Identifier: Apache-2.0
#include "ttconv/tt_svd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace ttconv {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Relative floor below which singular values are treated as numerical noise
// when no tolerance budget is in play.
constexpr double kNoiseFloor = 1e-14;

Index select_rank(const Eigen::VectorXd& singular_values, double delta, Index cap) {
    Index count = singular_values.size();
    Index rank;
    if (delta > 0.0) {
        // Discard the smallest tail whose squared mass fits the budget.
        double tail = 0.0;
        rank = count;
        while (rank > 1) {
            double candidate = tail + singular_values[rank - 1] * singular_values[rank - 1];
            if (candidate > delta * delta) break;
            tail = candidate;
            --rank;
        }
    } else {
        double floor = count > 0 ? singular_values[0] * kNoiseFloor : 0.0;
        rank = 0;
        while (rank < count && singular_values[rank] > floor) ++rank;
        rank = std::max<Index>(rank, 1);
    }
    if (cap >= 1) rank = std::min(rank, cap);
    return std::max<Index>(rank, 1);
}

TtTensor zero_train(const std::vector<Index>& modes) {
    std::vector<TtCore> cores;
    cores.reserve(modes.size());
    for (Index mode : modes) cores.emplace_back(1, mode, 1);
    return TtTensor(std::move(cores));
}

} // namespace

TtTensor tt_decompose(const DenseTensor& dense, const DecomposeOptions& options) {
    const std::vector<Index>& modes = dense.shape();
    const Index order = dense.order();

    if (!dense.all_finite()) {
        throw DataError("input tensor contains non-finite values");
    }
    if (!options.bond_caps.empty() &&
        static_cast<Index>(options.bond_caps.size()) != order - 1) {
        throw ShapeError("expected " + std::to_string(order - 1) + " bond caps, got " +
                         std::to_string(options.bond_caps.size()));
    }
    for (Index cap : options.bond_caps) {
        if (cap < 1) throw ShapeError("rank caps must be >= 1");
    }
    if (options.tolerance) {
        double tol = *options.tolerance;
        if (!(tol > 0.0 && tol < 1.0)) {
            throw DataError("tolerance must lie in (0, 1), got " + std::to_string(tol));
        }
    }

    const double norm = dense.frobenius_norm();
    if (norm == 0.0) return zero_train(modes);

    double delta = 0.0;
    if (options.tolerance && order > 1) {
        delta = *options.tolerance / std::sqrt(static_cast<double>(order - 1)) * norm;
    }

    // Working buffer: a (rank x remaining-modes) matrix in row-major layout.
    // Reshaping (r, I_i * rest) -> (r * I_i, rest) is a no-op on the flat
    // storage, which is what makes the row-major formulation convenient.
    std::vector<double> work(dense.data().begin(), dense.data().end());
    Index lead_rank = 1;
    Index tail_elems = dense.size();

    std::vector<TtCore> cores;
    cores.reserve(static_cast<std::size_t>(order));

    for (Index i = 0; i + 1 < order; ++i) {
        const Index rows = lead_rank * modes[static_cast<std::size_t>(i)];
        const Index cols = tail_elems / modes[static_cast<std::size_t>(i)];

        Eigen::Map<const RowMatrix> unfolding(work.data(), rows, cols);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(unfolding,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);

        Index cap = options.bond_caps.empty() ? -1 : options.bond_caps[static_cast<std::size_t>(i)];
        Index rank = select_rank(svd.singularValues(), delta, cap);

        TtCore core(lead_rank, modes[static_cast<std::size_t>(i)], rank);
        for (Index row = 0; row < rows; ++row) {
            for (Index r = 0; r < rank; ++r) {
                core.data[static_cast<std::size_t>(row * rank + r)] = svd.matrixU()(row, r);
            }
        }
        cores.push_back(std::move(core));

        // Next unfolding: diag(s[:rank]) * V[:, :rank]^T, row-major (rank x cols).
        std::vector<double> next(static_cast<std::size_t>(rank * cols));
        for (Index r = 0; r < rank; ++r) {
            const double s = svd.singularValues()(r);
            for (Index c = 0; c < cols; ++c) {
                next[static_cast<std::size_t>(r * cols + c)] = s * svd.matrixV()(c, r);
            }
        }
        work = std::move(next);
        lead_rank = rank;
        tail_elems = cols;
    }

    cores.emplace_back(lead_rank, modes.back(), 1, std::move(work));
    return TtTensor(std::move(cores));
}

TtTensor tt_decompose_max_rank(const DenseTensor& dense, Index uniform_cap) {
    if (uniform_cap < 1) throw ShapeError("rank cap must be >= 1");
    DecomposeOptions options;
    if (dense.order() > 1) {
        options.bond_caps.assign(static_cast<std::size_t>(dense.order() - 1), uniform_cap);
    }
    return tt_decompose(dense, options);
}

TtTensor tt_decompose_tolerance(const DenseTensor& dense, double tolerance) {
    DecomposeOptions options;
    options.tolerance = tolerance;
    return tt_decompose(dense, options);
}

} // namespace ttconv
