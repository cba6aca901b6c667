// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include "smoe/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "smoe/error.hpp"

namespace smoe {

DenseNet::DenseNet(std::vector<Matrix> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) {
        throw InputError("network needs at least one layer");
    }
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const Matrix& w = layers_[i];
        if (w.rows() == 0 || w.cols() == 0) {
            throw InputError("layer " + std::to_string(i + 1) + " is empty");
        }
        if (!w.all_finite()) {
            throw InputError("layer " + std::to_string(i + 1) + " has non-finite entries");
        }
        if (i > 0 && layers_[i - 1].rows() != w.cols()) {
            throw InputError("layer " + std::to_string(i + 1) + " expects " + std::to_string(w.cols()) +
                             " inputs but layer " + std::to_string(i) + " produces " +
                             std::to_string(layers_[i - 1].rows()));
        }
    }
}

std::size_t DenseNet::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& w : layers_) {
        n += w.size();
    }
    return n;
}

std::vector<double> dense_forward(const DenseNet& net, std::span<const double> x) {
    if (x.size() != net.input_dim()) {
        throw InputError("network input has dimension " + std::to_string(x.size()) + ", expected " +
                         std::to_string(net.input_dim()));
    }
    std::vector<double> h(x.begin(), x.end());
    const auto& layers = net.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        h = layers[i].multiply(h);
        if (i + 1 < layers.size()) {
            for (double& v : h) {
                v = std::max(v, 0.0);
            }
        }
    }
    return h;
}

std::size_t SparsePattern::ones() const noexcept {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), static_cast<unsigned char>(1)));
}

std::vector<std::size_t> topk_select(std::span<const double> logits, std::size_t k) {
    const std::size_t t = logits.size();
    if (k < 1 || k > t) {
        throw InputError("top-k needs 1 <= k <= T, got k=" + std::to_string(k) + ", T=" + std::to_string(t));
    }
    for (double v : logits) {
        if (!std::isfinite(v)) {
            throw InputError("router logits must be finite");
        }
    }
    std::vector<std::size_t> order(t);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return logits[a] > logits[b] || (logits[a] == logits[b] && a < b);
                      });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

GateVector masked_softmax(std::span<const double> logits, std::span<const std::size_t> selected) {
    if (selected.empty()) {
        throw InputError("masked softmax needs a nonempty selection");
    }
    GateVector gate;
    gate.weights.assign(logits.size(), 0.0);
    gate.selected.assign(selected.begin(), selected.end());
    std::sort(gate.selected.begin(), gate.selected.end());
    if (std::adjacent_find(gate.selected.begin(), gate.selected.end()) != gate.selected.end()) {
        throw InputError("masked softmax selection contains duplicates");
    }
    if (gate.selected.back() >= logits.size()) {
        throw InputError("masked softmax selection index out of range");
    }

    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j : gate.selected) {
        if (!std::isfinite(logits[j])) {
            throw InputError("router logits must be finite");
        }
        top = std::max(top, logits[j]);
    }
    double total = 0.0;
    for (std::size_t j : gate.selected) {
        const double e = std::exp(logits[j] - top);
        gate.weights[j] = e;
        total += e;
    }
    for (std::size_t j : gate.selected) {
        gate.weights[j] = std::max(gate.weights[j] / total, std::numeric_limits<double>::min());
    }
    return gate;
}

SparsePattern sparse_pattern(const GateVector& gate) {
    SparsePattern p;
    p.mask.resize(gate.weights.size());
    for (std::size_t j = 0; j < gate.weights.size(); ++j) {
        p.mask[j] = gate.weights[j] != 0.0 ? 1 : 0;
    }
    return p;
}

SMoEModel::SMoEModel(std::vector<DenseNet> experts, DenseNet router, std::size_t k)
    : experts_(std::move(experts)), router_(std::move(router)), k_(k) {
    const std::size_t t = experts_.size();
    if (t == 0) {
        throw InputError("model needs at least one expert");
    }
    if (k_ < 1 || k_ > t) {
        throw InputError("model needs 1 <= k <= T, got k=" + std::to_string(k_) + ", T=" + std::to_string(t));
    }
    if (router_.output_dim() != t) {
        throw InputError("router has " + std::to_string(router_.output_dim()) + " outputs, expected T=" +
                         std::to_string(t));
    }
    for (std::size_t j = 0; j < t; ++j) {
        if (experts_[j].input_dim() != router_.input_dim()) {
            throw InputError("expert " + std::to_string(j) + " input dimension differs from the router's");
        }
        if (experts_[j].output_dim() != 1) {
            throw InputError("expert " + std::to_string(j) + " must have a single output");
        }
    }
}

std::size_t SMoEModel::parameter_count() const noexcept {
    std::size_t n = router_.parameter_count();
    for (const auto& e : experts_) {
        n += e.parameter_count();
    }
    return n;
}

std::vector<double> SMoEModel::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    auto append = [&](const DenseNet& net) {
        for (const auto& w : net.layers()) {
            flat.insert(flat.end(), w.data().begin(), w.data().end());
        }
    };
    append(router_);
    for (const auto& e : experts_) {
        append(e);
    }
    return flat;
}

SMoEModel SMoEModel::with_parameters(std::span<const double> flat) const {
    if (flat.size() != parameter_count()) {
        throw InputError("parameter vector has " + std::to_string(flat.size()) + " entries, model has " +
                         std::to_string(parameter_count()));
    }
    SMoEModel out = *this;
    std::size_t pos = 0;
    auto load = [&](DenseNet& net) {
        for (auto& w : net.layers_) {
            auto dst = w.data();
            std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                      flat.begin() + static_cast<std::ptrdiff_t>(pos + dst.size()), dst.begin());
            pos += dst.size();
            if (!w.all_finite()) {
                throw InputError("parameter vector has non-finite entries");
            }
        }
    };
    load(out.router_);
    for (auto& e : out.experts_) {
        load(e);
    }
    return out;
}

void SMoEModel::add_scaled(double alpha, std::span<const double> direction) {
    if (direction.size() != parameter_count()) {
        throw InputError("update direction has " + std::to_string(direction.size()) + " entries, model has " +
                         std::to_string(parameter_count()));
    }
    std::size_t pos = 0;
    auto step = [&](DenseNet& net) {
        for (auto& w : net.layers_) {
            for (double& v : w.data()) {
                v += alpha * direction[pos++];
            }
        }
    };
    step(router_);
    for (auto& e : experts_) {
        step(e);
    }
}

ForwardResult smoe_forward(const SMoEModel& model, std::span<const double> x) {
    if (x.size() != model.input_dim()) {
        throw InputError("model input has dimension " + std::to_string(x.size()) + ", expected " +
                         std::to_string(model.input_dim()));
    }
    ForwardResult out;
    out.logits = dense_forward(model.router(), x);
    out.gate = masked_softmax(out.logits, topk_select(out.logits, model.k()));
    for (std::size_t j : out.gate.selected) {
        out.prediction += out.gate.weights[j] * dense_forward(model.expert(j), x)[0];
        ++out.experts_evaluated;
    }
    return out;
}

Predictor predictor_of(const SMoEModel& model) {
    auto shared = std::make_shared<const SMoEModel>(model);
    return Predictor(model.input_dim(), [shared](std::span<const double> x) { return smoe_forward(*shared, x).prediction; });
}

}  // namespace smoe
