// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include "smoe/learning.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "smoe/error.hpp"
#include "smoe/random.hpp"
#include "smoe/text_format.hpp"

namespace smoe {

Label label_from_int(long long v) {
    if (v == 1) {
        return Label::positive;
    }
    if (v == -1) {
        return Label::negative;
    }
    throw InputError("label must be +1 or -1, got " + std::to_string(v));
}

double l2_norm(std::span<const double> x) noexcept {
    double acc = 0.0;
    for (double v : x) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

Dataset::Dataset(std::vector<LabeledExample> examples, double norm_bound)
    : examples_(std::move(examples)), norm_bound_(norm_bound) {
    if (!(norm_bound_ > 0.0) || !std::isfinite(norm_bound_)) {
        throw InputError("dataset norm bound must be positive and finite");
    }
    if (examples_.empty()) {
        throw InputError("dataset must contain at least one example");
    }
    dim_ = examples_.front().x.size();
    if (dim_ == 0) {
        throw InputError("feature dimension must be at least 1");
    }
    for (std::size_t i = 0; i < examples_.size(); ++i) {
        const auto& ex = examples_[i];
        if (ex.x.size() != dim_) {
            throw InputError("example " + std::to_string(i) + " has dimension " + std::to_string(ex.x.size()) +
                             ", expected " + std::to_string(dim_));
        }
        if (ex.y != Label::positive && ex.y != Label::negative) {
            throw InputError("example " + std::to_string(i) + " has a label outside {+1,-1}");
        }
        for (double v : ex.x) {
            if (!std::isfinite(v)) {
                throw InputError("example " + std::to_string(i) + " has a non-finite feature");
            }
        }
        if (l2_norm(ex.x) > norm_bound_) {
            throw InputError("example " + std::to_string(i) + " exceeds the norm bound " + format_real(norm_bound_));
        }
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<LabeledExample> picked;
    picked.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= examples_.size()) {
            throw InputError("subset index out of range");
        }
        picked.push_back(examples_[i]);
    }
    return Dataset(std::move(picked), norm_bound_);
}

LossFunction LossFunction::zero_one() noexcept { return LossFunction(LossKind::zero_one, 0.0); }

LossFunction LossFunction::clipped_hinge(double slope) {
    if (!(slope > 0.0) || !std::isfinite(slope)) {
        throw InputError("clipped hinge slope must be positive and finite");
    }
    return LossFunction(LossKind::clipped_hinge, slope);
}

double LossFunction::lipschitz() const noexcept {
    return kind_ == LossKind::zero_one ? std::numeric_limits<double>::infinity() : slope_;
}

std::string LossFunction::name() const {
    if (kind_ == LossKind::zero_one) {
        return "zero_one";
    }
    return slope_ == 1.0 ? "clipped_hinge" : "clipped_hinge(slope=" + format_real(slope_) + ")";
}

double LossFunction::operator()(Label y, double prediction) const noexcept {
    if (!std::isfinite(prediction)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (kind_ == LossKind::zero_one) {
        const Label predicted = prediction >= 0.0 ? Label::positive : Label::negative;
        return predicted == y ? 0.0 : 1.0;
    }
    return std::min(1.0, std::max(0.0, 1.0 - slope_ * to_real(y) * prediction));
}

double LossFunction::derivative(Label y, double prediction) const noexcept {
    if (kind_ == LossKind::zero_one || !std::isfinite(prediction)) {
        return 0.0;
    }
    const double inner = 1.0 - slope_ * to_real(y) * prediction;
    return (inner > 0.0 && inner < 1.0) ? -slope_ * to_real(y) : 0.0;
}

Predictor Predictor::constant(std::size_t input_dim, double value) {
    return Predictor(input_dim, [value](std::span<const double>) { return value; });
}

double empirical_risk(const Predictor& f, const Dataset& data, const LossFunction& loss) {
    if (f.input_dim() != data.dim()) {
        throw InputError("predictor expects dimension " + std::to_string(f.input_dim()) + ", data has " +
                         std::to_string(data.dim()));
    }
    double total = 0.0;
    for (const auto& ex : data.examples()) {
        total += loss(ex.y, f(ex.x));
    }
    return total / static_cast<double>(data.size());
}

GapReport generalization_gap(const Predictor& f, const Dataset& train, const Dataset& test, const LossFunction& loss) {
    if (train.dim() != test.dim()) {
        throw InputError("train and test dimensions differ");
    }
    GapReport r;
    r.train_risk = empirical_risk(f, train, loss);
    r.test_risk = empirical_risk(f, test, loss);
    r.gap = std::abs(r.train_risk - r.test_risk);
    return r;
}

namespace {

// Pull x back inside the closed c-ball; one rescale can land a rounding step outside.
void fit_into_ball(std::vector<double>& x, double c) {
    for (int guard = 0; guard < 64; ++guard) {
        const double n = l2_norm(x);
        if (n <= c) {
            return;
        }
        const double s = std::nextafter(c / n, 0.0);
        for (double& v : x) {
            v *= s;
        }
    }
}

}  // namespace

Dataset synth_gaussian_mixture(std::uint64_t seed, std::size_t m, std::size_t d, std::size_t clusters_per_class,
                               double norm_bound, double center_spread) {
    if (m == 0 || m % 2 != 0) {
        throw InputError("sample count m must be even and positive, got " + std::to_string(m));
    }
    if (d == 0) {
        throw InputError("dimension d must be at least 1");
    }
    if (clusters_per_class == 0) {
        throw InputError("clusters_per_class must be at least 1");
    }
    if (!(norm_bound > 0.0) || !std::isfinite(norm_bound)) {
        throw InputError("norm bound must be positive and finite");
    }
    if (!(center_spread >= 0.0) || !std::isfinite(center_spread)) {
        throw InputError("center spread must be nonnegative and finite");
    }

    Engine rng = make_engine(seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);

    // centers[label][cluster]
    std::vector<std::vector<std::vector<double>>> centers(2);
    for (auto& per_class : centers) {
        per_class.resize(clusters_per_class, std::vector<double>(d));
        for (auto& c : per_class) {
            for (double& v : c) {
                v = center_spread * normal(rng);
            }
        }
    }

    std::vector<LabeledExample> examples;
    examples.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t cls = i < m / 2 ? 0 : 1;
        const std::size_t within = cls == 0 ? i : i - m / 2;
        const auto& center = centers[cls][within % clusters_per_class];
        LabeledExample ex;
        ex.y = cls == 0 ? Label::positive : Label::negative;
        ex.x.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            ex.x[j] = center[j] + normal(rng);
        }
        examples.push_back(std::move(ex));
    }
    std::shuffle(examples.begin(), examples.end(), rng);

    double max_norm = 0.0;
    for (const auto& ex : examples) {
        max_norm = std::max(max_norm, l2_norm(ex.x));
    }
    if (max_norm > 0.0) {
        const double scale = norm_bound / max_norm;
        for (auto& ex : examples) {
            for (double& v : ex.x) {
                v *= scale;
            }
            fit_into_ball(ex.x, norm_bound);
        }
    }
    return Dataset(std::move(examples), norm_bound);
}

std::pair<Dataset, Dataset> split_by_count(std::uint64_t seed, const Dataset& data, std::size_t train_count) {
    if (train_count == 0 || train_count >= data.size()) {
        throw InputError("split would leave an empty side (" + std::to_string(train_count) + " of " +
                         std::to_string(data.size()) + " to train)");
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Engine rng = make_engine(seed, 1);
    std::shuffle(order.begin(), order.end(), rng);
    const std::span<const std::size_t> all(order);
    return {data.subset(all.first(train_count)), data.subset(all.subspan(train_count))};
}

std::pair<Dataset, Dataset> train_test_split(std::uint64_t seed, const Dataset& data, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InputError("train_fraction must lie in (0, 1)");
    }
    const auto count = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(data.size())));
    return split_by_count(seed, data, count);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << "y";
    for (std::size_t j = 1; j <= data.dim(); ++j) {
        out << ",x" << j;
    }
    out << '\n';
    for (const auto& ex : data.examples()) {
        out << (ex.y == Label::positive ? "+1" : "-1");
        for (double v : ex.x) {
            out << ',' << format_real(v);
        }
        out << '\n';
    }
}

Dataset read_dataset_csv(std::istream& in, double norm_bound) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("dataset CSV is empty");
    }
    const auto header = split(trim(line), ',');
    if (header.size() < 2 || trim(header[0]) != "y") {
        throw InputError("dataset CSV header must be y,x1,...,xd");
    }
    const std::size_t d = header.size() - 1;
    for (std::size_t j = 1; j <= d; ++j) {
        if (trim(header[j]) != "x" + std::to_string(j)) {
            throw InputError("dataset CSV header column " + std::to_string(j + 1) + " must be x" + std::to_string(j));
        }
    }
    std::vector<LabeledExample> examples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(trim(line), ',');
        if (fields.size() != d + 1) {
            throw InputError("dataset CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(d + 1));
        }
        LabeledExample ex;
        ex.y = label_from_int(parse_integer(fields[0]));
        ex.x.reserve(d);
        for (std::size_t j = 1; j <= d; ++j) {
            ex.x.push_back(parse_real(fields[j]));
        }
        examples.push_back(std::move(ex));
    }
    return Dataset(std::move(examples), norm_bound);
}

}  // namespace smoe
