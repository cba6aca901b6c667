// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0
//
// Desk-scale empirical risk minimization for SMoE models, its finite-difference oracle, and the
// per-k gap experiment that sets measured gaps next to the network bound.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "smoe/bounds.hpp"
#include "smoe/complexity.hpp"
#include "smoe/error.hpp"
#include "smoe/learning.hpp"
#include "smoe/model.hpp"
#include "smoe/random.hpp"

namespace smoe {

struct ModelShape {
    std::size_t input_dim = 2;
    std::size_t experts = 4;
    std::size_t k = 1;
    /// Hidden widths; empty means a single linear layer.
    std::vector<std::size_t> expert_hidden;
    std::vector<std::size_t> router_hidden;
};

/// Entries uniform in [-s, s] with s = init_scale / sqrt(fan_in).
SMoEModel init_model(const ModelShape& shape, std::uint64_t seed, double init_scale = 1.0);

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double learning_rate = 0.1;
    std::uint64_t seed = 0;
    LossFunction loss = LossFunction::clipped_hinge();
    double weight_init_scale = 1.0;

    void validate() const;
};

struct TrainHistory {
    /// Training risk under cfg.loss before the first epoch and after each epoch (epochs + 1 entries).
    std::vector<double> risks;
    SMoEModel model;
    std::uint64_t seed = 0;
};

/// Raised when the training risk stops being finite; carries the risks recorded so far.
class TrainingError : public Error {
public:
    TrainingError(const std::string& what, std::vector<double> risks) : Error(what), risks_(std::move(risks)) {}
    const std::vector<double>& risks() const noexcept { return risks_; }

private:
    std::vector<double> risks_;
};

/// Plain minibatch gradient descent. The top-k selection is held fixed inside each forward pass, so the
/// router only receives gradient through the softmax over its selected logits.
TrainHistory erm_train(SMoEModel model, const Dataset& data, const TrainConfig& cfg);

struct LossGradient {
    double loss = 0.0;
    /// Same layout as SMoEModel::parameters().
    std::vector<double> gradient;
};

/// Mean loss over `batch` and its gradient with respect to every model parameter.
LossGradient batch_loss_gradient(const SMoEModel& model, const Dataset& batch, const LossFunction& loss);
double batch_loss(const SMoEModel& model, const Dataset& batch, const LossFunction& loss);

struct GradcheckOptions {
    double epsilon = 1e-5;
    /// Minimum distance of every ReLU pre-activation, top-k boundary and loss kink from zero.
    double kink_margin = 1e-6;
    /// Relative error is |analytic - numeric| / max(|analytic|, |numeric|, denominator_floor).
    double denominator_floor = 1e-6;
    std::size_t max_resamples = 100;
    LossFunction loss = LossFunction::clipped_hinge();
};

bool is_kink_free(const SMoEModel& model, const Dataset& batch, const LossFunction& loss, double margin);

/// Max relative error between the analytic gradient and central differences. Throws CheckError if the
/// batch is not kink-free.
double finite_diff_gradcheck(const SMoEModel& model, const Dataset& batch, const GradcheckOptions& options = {});

using BatchSampler = std::function<Dataset(Engine&)>;

/// Draws batches until one is kink-free (at most max_resamples attempts), then checks it.
double finite_diff_gradcheck(const SMoEModel& model, const BatchSampler& sample, std::uint64_t seed,
                             const GradcheckOptions& options = {});

/// K_i = spectral norm of W_i, b_i = sum of the row norms of W_i, c passed through.
NormBudget extract_norm_budget(const DenseNet& net, double input_bound);

/// Element-wise maximum; all budgets must share depth and input bound.
NormBudget max_norm_budget(std::span<const NormBudget> budgets);

struct DataConfig {
    std::size_t dim = 2;
    std::size_t clusters_per_class = 2;
    double norm_bound = 1.0;
    double center_spread = 3.0;
    std::size_t train_size = 512;
    std::size_t test_size = 5120;
};

struct GapExperimentConfig {
    TrainConfig train;
    DataConfig data;
    /// shape.k is ignored; each entry of k_values is trained separately.
    ModelShape shape;
    std::vector<std::size_t> k_values{1};
    double delta = 0.05;
    double natarajan_constant = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct GapRow {
    std::size_t k = 0;
    /// Measured with the unit-slope clipped hinge, the loss the bound is stated for.
    GapReport gap;
    double train_error = 0.0;  // zero-one
    double test_error = 0.0;   // zero-one
    NormBudget expert_budget;
    double expert_rademacher_bound = 0.0;
    long long router_params = 0;
    double natarajan_dim = 0.0;
    BoundBreakdown bound;
    /// bound.total > 1: uninformative for a [0, 1] loss.
    bool vacuous = false;
    /// gap <= bound.total. A violation is a finding about the unstated constants, not an error.
    bool bound_dominates_gap = false;
};

/// Trains one model per k (seed + k for initialization and shuffling) on a shared synthetic split and
/// evaluates the network bound on the trained weights.
std::vector<GapRow> gap_experiment(const GapExperimentConfig& cfg);

nlohmann::json gap_report_json(const std::vector<GapRow>& rows);
void write_gap_csv(std::ostream& out, const std::vector<GapRow>& rows);

}  // namespace smoe
