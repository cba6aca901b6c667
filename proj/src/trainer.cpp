// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include "smoe/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "smoe/text_format.hpp"

namespace smoe {

namespace {

Matrix random_layer(std::size_t rows, std::size_t cols, double init_scale, Engine& rng) {
    const double s = init_scale / std::sqrt(static_cast<double>(cols));
    std::uniform_real_distribution<double> uniform(-s, s);
    Matrix w(rows, cols);
    for (double& v : w.data()) {
        v = uniform(rng);
    }
    return w;
}

DenseNet random_net(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out, double init_scale,
                    Engine& rng) {
    std::vector<Matrix> layers;
    std::size_t width = in;
    for (std::size_t h : hidden) {
        if (h == 0) {
            throw InputError("hidden layer widths must be positive");
        }
        layers.push_back(random_layer(h, width, init_scale, rng));
        width = h;
    }
    layers.push_back(random_layer(out, width, init_scale, rng));
    return DenseNet(std::move(layers));
}

// Layer inputs a_0 = x, a_1, ..., a_{r-1} and pre-activations z_1, ..., z_r.
struct NetTrace {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> pre;

    const std::vector<double>& output() const { return pre.back(); }
};

NetTrace trace_forward(const DenseNet& net, std::span<const double> x) {
    NetTrace t;
    const auto& layers = net.layers();
    t.inputs.reserve(layers.size());
    t.pre.reserve(layers.size());
    t.inputs.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        t.pre.push_back(layers[l].multiply(t.inputs.back()));
        if (l + 1 < layers.size()) {
            std::vector<double> a = t.pre.back();
            for (double& v : a) {
                v = std::max(v, 0.0);
            }
            t.inputs.push_back(std::move(a));
        }
    }
    return t;
}

// Accumulates d(out . delta)/dW into grad (flat, row-major per layer, layers in order).
void backprop(const DenseNet& net, const NetTrace& t, std::vector<double> delta, double* grad) {
    const auto& layers = net.layers();
    std::vector<std::size_t> offset(layers.size(), 0);
    for (std::size_t l = 1; l < layers.size(); ++l) {
        offset[l] = offset[l - 1] + layers[l - 1].size();
    }
    for (std::size_t l = layers.size(); l-- > 0;) {
        const Matrix& w = layers[l];
        const auto& in = t.inputs[l];
        double* g = grad + offset[l];
        for (std::size_t r = 0; r < w.rows(); ++r) {
            if (delta[r] == 0.0) {
                continue;
            }
            for (std::size_t c = 0; c < w.cols(); ++c) {
                g[r * w.cols() + c] += delta[r] * in[c];
            }
        }
        if (l > 0) {
            std::vector<double> prev = w.multiply_transposed(delta);
            const auto& z = t.pre[l - 1];
            for (std::size_t j = 0; j < prev.size(); ++j) {
                if (!(z[j] > 0.0)) {
                    prev[j] = 0.0;
                }
            }
            delta = std::move(prev);
        }
    }
}

std::vector<std::size_t> expert_offsets(const SMoEModel& model) {
    std::vector<std::size_t> off(model.expert_count());
    std::size_t pos = model.router().parameter_count();
    for (std::size_t j = 0; j < model.expert_count(); ++j) {
        off[j] = pos;
        pos += model.expert(j).parameter_count();
    }
    return off;
}

void check_dims(const SMoEModel& model, const Dataset& data) {
    if (model.input_dim() != data.dim()) {
        throw InputError("model expects dimension " + std::to_string(model.input_dim()) + ", data has " +
                         std::to_string(data.dim()));
    }
}

// Adds the gradient of `scale * loss(example)` into grad and returns the example's loss.
double accumulate_example(const SMoEModel& model, const LabeledExample& ex, const LossFunction& loss, double scale,
                          const std::vector<std::size_t>& offsets, std::vector<double>& grad) {
    const NetTrace router = trace_forward(model.router(), ex.x);
    const auto& logits = router.output();
    const GateVector gate = masked_softmax(logits, topk_select(logits, model.k()));

    std::vector<NetTrace> traces;
    traces.reserve(gate.selected.size());
    double f = 0.0;
    for (std::size_t j : gate.selected) {
        traces.push_back(trace_forward(model.expert(j), ex.x));
        f += gate.weights[j] * traces.back().output()[0];
    }
    const double value = loss(ex.y, f);
    const double df = scale * loss.derivative(ex.y, f);
    if (df == 0.0) {
        return value;
    }

    std::vector<double> dlogits(model.expert_count(), 0.0);
    for (std::size_t s = 0; s < gate.selected.size(); ++s) {
        const std::size_t j = gate.selected[s];
        const double h = traces[s].output()[0];
        dlogits[j] = df * gate.weights[j] * (h - f);
        backprop(model.expert(j), traces[s], {df * gate.weights[j]}, grad.data() + offsets[j]);
    }
    backprop(model.router(), router, std::move(dlogits), grad.data());
    return value;
}

LossGradient loss_gradient_over(const SMoEModel& model, const Dataset& data, std::span<const std::size_t> indices,
                                const LossFunction& loss) {
    LossGradient out;
    out.gradient.assign(model.parameter_count(), 0.0);
    const auto offsets = expert_offsets(model);
    const double scale = 1.0 / static_cast<double>(indices.size());
    for (std::size_t i : indices) {
        out.loss += accumulate_example(model, data[i], loss, scale, offsets, out.gradient);
    }
    out.loss *= scale;
    return out;
}

}  // namespace

SMoEModel init_model(const ModelShape& shape, std::uint64_t seed, double init_scale) {
    if (shape.input_dim == 0 || shape.experts == 0) {
        throw InputError("model shape needs positive input dimension and expert count");
    }
    if (!(init_scale > 0.0) || !std::isfinite(init_scale)) {
        throw InputError("weight_init_scale must be positive and finite");
    }
    Engine rng = make_engine(seed, 2);
    DenseNet router = random_net(shape.input_dim, shape.router_hidden, shape.experts, init_scale, rng);
    std::vector<DenseNet> experts;
    experts.reserve(shape.experts);
    for (std::size_t j = 0; j < shape.experts; ++j) {
        experts.push_back(random_net(shape.input_dim, shape.expert_hidden, 1, init_scale, rng));
    }
    return SMoEModel(std::move(experts), std::move(router), shape.k);
}

void TrainConfig::validate() const {
    if (batch_size < 1) {
        throw InputError("batch_size must be at least 1");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw InputError("learning_rate must be nonnegative and finite");
    }
    if (loss.kind() == LossKind::zero_one) {
        throw InputError("zero_one loss has no gradient; train with clipped_hinge");
    }
    if (!(weight_init_scale > 0.0) || !std::isfinite(weight_init_scale)) {
        throw InputError("weight_init_scale must be positive and finite");
    }
}

LossGradient batch_loss_gradient(const SMoEModel& model, const Dataset& batch, const LossFunction& loss) {
    check_dims(model, batch);
    std::vector<std::size_t> all(batch.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return loss_gradient_over(model, batch, all, loss);
}

double batch_loss(const SMoEModel& model, const Dataset& batch, const LossFunction& loss) {
    return empirical_risk(predictor_of(model), batch, loss);
}

TrainHistory erm_train(SMoEModel model, const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    check_dims(model, data);

    TrainHistory hist{{}, model, cfg.seed};
    hist.risks.reserve(cfg.epochs + 1);
    hist.risks.push_back(batch_loss(model, data, cfg.loss));
    if (!std::isfinite(hist.risks.back())) {
        throw TrainingError("initial training risk is not finite", hist.risks);
    }

    Engine rng = make_engine(cfg.seed, 3);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t len = std::min(cfg.batch_size, order.size() - start);
            const auto step = loss_gradient_over(model, data, std::span(order).subspan(start, len), cfg.loss);
            model.add_scaled(-cfg.learning_rate, step.gradient);
        }
        double risk = std::numeric_limits<double>::quiet_NaN();
        try {
            risk = batch_loss(model, data, cfg.loss);
        } catch (const InputError&) {
            // non-finite router logits surface as input errors from top-k
        }
        if (!std::isfinite(risk)) {
            throw TrainingError("training risk became non-finite in epoch " + std::to_string(epoch + 1), hist.risks);
        }
        hist.risks.push_back(risk);
    }
    hist.model = std::move(model);
    return hist;
}

bool is_kink_free(const SMoEModel& model, const Dataset& batch, const LossFunction& loss, double margin) {
    check_dims(model, batch);
    auto hidden_clear = [margin](const NetTrace& t) {
        for (std::size_t l = 0; l + 1 < t.pre.size(); ++l) {
            for (double z : t.pre[l]) {
                if (std::abs(z) <= margin) {
                    return false;
                }
            }
        }
        return true;
    };
    for (const auto& ex : batch.examples()) {
        const NetTrace router = trace_forward(model.router(), ex.x);
        if (!hidden_clear(router)) {
            return false;
        }
        const auto& logits = router.output();
        if (model.k() < model.expert_count()) {
            std::vector<double> sorted = logits;
            std::sort(sorted.begin(), sorted.end(), std::greater<>());
            if (sorted[model.k() - 1] - sorted[model.k()] <= margin) {
                return false;
            }
        }
        const GateVector gate = masked_softmax(logits, topk_select(logits, model.k()));
        double f = 0.0;
        for (std::size_t j : gate.selected) {
            const NetTrace t = trace_forward(model.expert(j), ex.x);
            if (!hidden_clear(t)) {
                return false;
            }
            f += gate.weights[j] * t.output()[0];
        }
        if (loss.kind() == LossKind::zero_one) {
            return false;
        }
        const double inner = 1.0 - loss.slope() * to_real(ex.y) * f;
        if (std::abs(inner) <= margin || std::abs(inner - 1.0) <= margin) {
            return false;
        }
    }
    return true;
}

double finite_diff_gradcheck(const SMoEModel& model, const Dataset& batch, const GradcheckOptions& opt) {
    if (!(opt.epsilon > 0.0)) {
        throw InputError("finite-difference step must be positive");
    }
    if (!is_kink_free(model, batch, opt.loss, opt.kink_margin)) {
        throw CheckError("batch touches a ReLU kink, a top-k boundary or a loss kink");
    }
    const std::vector<double> analytic = batch_loss_gradient(model, batch, opt.loss).gradient;
    std::vector<double> params = model.parameters();
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + opt.epsilon;
        const double up = batch_loss(model.with_parameters(params), batch, opt.loss);
        params[i] = saved - opt.epsilon;
        const double down = batch_loss(model.with_parameters(params), batch, opt.loss);
        params[i] = saved;
        const double numeric = (up - down) / (2.0 * opt.epsilon);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), opt.denominator_floor});
        worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
    return worst;
}

double finite_diff_gradcheck(const SMoEModel& model, const BatchSampler& sample, std::uint64_t seed,
                             const GradcheckOptions& opt) {
    Engine rng = make_engine(seed, 4);
    for (std::size_t attempt = 0; attempt < opt.max_resamples; ++attempt) {
        Dataset batch = sample(rng);
        if (is_kink_free(model, batch, opt.loss, opt.kink_margin)) {
            return finite_diff_gradcheck(model, batch, opt);
        }
    }
    throw CheckError("no kink-free batch after " + std::to_string(opt.max_resamples) + " draws");
}

NormBudget extract_norm_budget(const DenseNet& net, double input_bound) {
    std::vector<double> spectral;
    std::vector<double> norm21;
    for (const auto& w : net.layers()) {
        spectral.push_back(spectral_norm(w));
        norm21.push_back(norm_21(w));
    }
    return NormBudget(std::move(spectral), std::move(norm21), input_bound);
}

NormBudget max_norm_budget(std::span<const NormBudget> budgets) {
    if (budgets.empty()) {
        throw InputError("cannot aggregate an empty list of norm budgets");
    }
    std::vector<double> spectral = budgets.front().spectral();
    std::vector<double> norm21 = budgets.front().norm21();
    for (const auto& b : budgets.subspan(1)) {
        if (b.depth() != spectral.size() || b.input_bound() != budgets.front().input_bound()) {
            throw InputError("norm budgets differ in depth or input bound");
        }
        for (std::size_t i = 0; i < spectral.size(); ++i) {
            spectral[i] = std::max(spectral[i], b.spectral()[i]);
            norm21[i] = std::max(norm21[i], b.norm21()[i]);
        }
    }
    return NormBudget(std::move(spectral), std::move(norm21), budgets.front().input_bound());
}

void GapExperimentConfig::validate() const {
    train.validate();
    if (k_values.empty()) {
        throw InputError("k_values must list at least one k");
    }
    for (std::size_t k : k_values) {
        if (k < 1 || k > shape.experts) {
            throw InputError("every k must satisfy 1 <= k <= T, got k=" + std::to_string(k));
        }
    }
    if (data.train_size == 0 || data.test_size == 0) {
        throw InputError("train_size and test_size must be positive");
    }
    if ((data.train_size + data.test_size) % 2 != 0) {
        throw InputError("train_size + test_size must be even (balanced classes)");
    }
    if (data.dim != shape.input_dim) {
        throw InputError("data dimension differs from the model input dimension");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InputError("delta must lie in (0, 1)");
    }
    if (!(natarajan_constant >= 0.0) || !std::isfinite(natarajan_constant)) {
        throw InputError("natarajan_constant must be nonnegative and finite");
    }
}

std::vector<GapRow> gap_experiment(const GapExperimentConfig& cfg) {
    cfg.validate();
    const Dataset full = synth_gaussian_mixture(cfg.seed, cfg.data.train_size + cfg.data.test_size, cfg.data.dim,
                                                cfg.data.clusters_per_class, cfg.data.norm_bound,
                                                cfg.data.center_spread);
    const auto [train, test] = split_by_count(cfg.seed, full, cfg.data.train_size);
    const LossFunction bound_loss = LossFunction::clipped_hinge();

    std::vector<GapRow> rows;
    for (std::size_t k : cfg.k_values) {
        ModelShape shape = cfg.shape;
        shape.k = k;
        TrainConfig tc = cfg.train;
        tc.seed = cfg.seed + k;
        const SMoEModel initial = init_model(shape, tc.seed, tc.weight_init_scale);
        const TrainHistory hist = erm_train(initial, train, tc);
        const Predictor f = predictor_of(hist.model);

        std::vector<NormBudget> budgets;
        for (const auto& e : hist.model.experts()) {
            budgets.push_back(extract_norm_budget(e, train.norm_bound()));
        }
        NormBudget budget = max_norm_budget(budgets);

        NetworkBoundInputs nb{budget};
        nb.router_outputs = static_cast<long long>(hist.model.expert_count());
        nb.router_params = static_cast<long long>(hist.model.router().parameter_count());
        nb.m = train.size();
        nb.experts = hist.model.expert_count();
        nb.k = k;
        nb.delta = cfg.delta;
        nb.lipschitz = bound_loss.lipschitz();
        nb.natarajan_constant = cfg.natarajan_constant;

        GapRow row{.k = k,
                   .gap = generalization_gap(f, train, test, bound_loss),
                   .train_error = empirical_risk(f, train, LossFunction::zero_one()),
                   .test_error = empirical_risk(f, test, LossFunction::zero_one()),
                   .expert_budget = budget,
                   .expert_rademacher_bound = bartlett_bound(budget, train.size()).value,
                   .router_params = nb.router_params,
                   .natarajan_dim = natarajan_nn_bound(nb.router_outputs, nb.router_params, cfg.natarajan_constant),
                   .bound = corollary1_bound(nb)};
        row.vacuous = row.bound.total > 1.0;
        row.bound_dominates_gap = row.gap.gap <= row.bound.total;
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json gap_report_json(const std::vector<GapRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({
            {"k", r.k},
            {"train_risk", r.gap.train_risk},
            {"test_risk", r.gap.test_risk},
            {"gap", r.gap.gap},
            {"train_error_zero_one", r.train_error},
            {"test_error_zero_one", r.test_error},
            {"bound_total", r.bound.total},
            {"bound_terms",
             {{"rademacher_term", r.bound.rademacher_term},
              {"sparsity_term", r.bound.sparsity_term},
              {"sample_term", r.bound.sample_term},
              {"confidence_term", r.bound.confidence_term}}},
            {"norm_budget_summary",
             {{"instantiation", "data-dependent (norms of the trained experts, max over experts)"},
              {"spectral", r.expert_budget.spectral()},
              {"norm21", r.expert_budget.norm21()},
              {"c", r.expert_budget.input_bound()},
              {"expert_rademacher_bound", r.expert_rademacher_bound}}},
            {"router_params", r.router_params},
            {"router_natarajan_bound", r.natarajan_dim},
            {"vacuous", r.vacuous},
            {"bound_dominates_gap", r.bound_dominates_gap},
        });
    }
    return out;
}

void write_gap_csv(std::ostream& out, const std::vector<GapRow>& rows) {
    out << "k,train_risk,test_risk,gap,bound_total,rademacher_term,sparsity_term,sample_term,confidence_term,"
           "vacuous,bound_dominates_gap\n";
    for (const auto& r : rows) {
        out << r.k << ',' << format_real(r.gap.train_risk) << ',' << format_real(r.gap.test_risk) << ','
            << format_real(r.gap.gap) << ',' << format_real(r.bound.total) << ','
            << format_real(r.bound.rademacher_term) << ',' << format_real(r.bound.sparsity_term) << ','
            << format_real(r.bound.sample_term) << ',' << format_real(r.bound.confidence_term) << ','
            << (r.vacuous ? 1 : 0) << ',' << (r.bound_dominates_gap ? 1 : 0) << '\n';
    }
}

}  // namespace smoe
