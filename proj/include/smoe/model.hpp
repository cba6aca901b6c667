// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0
//
// Sparse mixture of experts: f(x) = sum_j a(x)_j h_j(x), where a(x) is a softmax restricted to the
// top-k router logits and every other gate entry is exactly zero.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smoe/learning.hpp"
#include "smoe/matrix.hpp"

namespace smoe {

/// Feed-forward ReLU network W_r relu(W_{r-1} relu(... relu(W_1 x))). No biases, no activation after W_r.
class DenseNet {
public:
    explicit DenseNet(std::vector<Matrix> layers);

    std::size_t input_dim() const noexcept { return layers_.front().cols(); }
    std::size_t output_dim() const noexcept { return layers_.back().rows(); }
    std::size_t depth() const noexcept { return layers_.size(); }
    std::size_t parameter_count() const noexcept;

    const std::vector<Matrix>& layers() const noexcept { return layers_; }
    const Matrix& layer(std::size_t i) const { return layers_.at(i); }

    friend bool operator==(const DenseNet&, const DenseNet&) = default;

private:
    friend class SMoEModel;
    std::vector<Matrix> layers_;
};

std::vector<double> dense_forward(const DenseNet& net, std::span<const double> x);

/// Routing weights a(x). `selected` is sorted ascending and holds exactly the indices with nonzero weight.
struct GateVector {
    std::vector<double> weights;
    std::vector<std::size_t> selected;
};

/// Binary support indicator m(x) of a gate.
struct SparsePattern {
    std::vector<unsigned char> mask;

    std::size_t ones() const noexcept;
    friend bool operator==(const SparsePattern&, const SparsePattern&) = default;
};

/// Indices of the k largest logits, ties to the lower index, returned in ascending order.
std::vector<std::size_t> topk_select(std::span<const double> logits, std::size_t k);

/// Softmax over the selected logits, exact zeros elsewhere. A selected weight that would underflow is
/// floored at the smallest normal double so the support always equals `selected`.
GateVector masked_softmax(std::span<const double> logits, std::span<const std::size_t> selected);

SparsePattern sparse_pattern(const GateVector& gate);

class SMoEModel {
public:
    SMoEModel(std::vector<DenseNet> experts, DenseNet router, std::size_t k);

    std::size_t input_dim() const noexcept { return router_.input_dim(); }
    std::size_t expert_count() const noexcept { return experts_.size(); }
    std::size_t k() const noexcept { return k_; }

    const std::vector<DenseNet>& experts() const noexcept { return experts_; }
    const DenseNet& expert(std::size_t j) const { return experts_.at(j); }
    const DenseNet& router() const noexcept { return router_; }

    /// Flat parameter layout: router layers in order, then expert 0 layers, expert 1 layers, ...
    /// Each matrix contributes its row-major entries.
    std::size_t parameter_count() const noexcept;
    std::vector<double> parameters() const;
    SMoEModel with_parameters(std::span<const double> flat) const;
    /// parameters += alpha * direction; shapes never change.
    void add_scaled(double alpha, std::span<const double> direction);

    friend bool operator==(const SMoEModel&, const SMoEModel&) = default;

private:
    std::vector<DenseNet> experts_;
    DenseNet router_;
    std::size_t k_;
};

struct ForwardResult {
    double prediction = 0.0;
    GateVector gate;
    std::vector<double> logits;
    /// Number of expert networks actually run; equals k.
    std::size_t experts_evaluated = 0;
};

ForwardResult smoe_forward(const SMoEModel& model, std::span<const double> x);

Predictor predictor_of(const SMoEModel& model);

}  // namespace smoe
