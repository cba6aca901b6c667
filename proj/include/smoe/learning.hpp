// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0
//
// Labeled data, bounded losses, empirical risk and the measured generalization gap.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace smoe {

enum class Label : int { negative = -1, positive = 1 };

inline double to_real(Label y) noexcept { return static_cast<double>(static_cast<int>(y)); }

/// Accepts only +1 and -1.
Label label_from_int(long long v);

struct LabeledExample {
    std::vector<double> x;
    Label y = Label::positive;

    bool operator==(const LabeledExample&) const = default;
};

double l2_norm(std::span<const double> x) noexcept;

/// Ordered, nonempty sample whose feature vectors share one dimension and lie in the ball of radius norm_bound.
class Dataset {
public:
    Dataset(std::vector<LabeledExample> examples, double norm_bound);

    std::size_t size() const noexcept { return examples_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    double norm_bound() const noexcept { return norm_bound_; }

    const std::vector<LabeledExample>& examples() const noexcept { return examples_; }
    const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }

    Dataset subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<LabeledExample> examples_;
    std::size_t dim_ = 0;
    double norm_bound_ = 1.0;
};

enum class LossKind { zero_one, clipped_hinge };

/// Loss in [0, 1] on (label, real-valued prediction).
///
/// clipped_hinge(s) is min(1, max(0, 1 - s*y*yhat)) and is s-Lipschitz in yhat; the default s = 1 is the
/// loss used for bound evaluation. zero_one compares y with sign(yhat) (sign(0) = +1) and has no finite
/// Lipschitz constant.
class LossFunction {
public:
    static LossFunction zero_one() noexcept;
    static LossFunction clipped_hinge(double slope = 1.0);

    LossKind kind() const noexcept { return kind_; }
    /// +infinity for zero_one.
    double lipschitz() const noexcept;
    bool has_finite_lipschitz() const noexcept { return kind_ != LossKind::zero_one; }
    /// Margin slope s of the clipped hinge (0 for zero_one).
    double slope() const noexcept { return slope_; }
    std::string name() const;

    /// NaN for non-finite predictions so divergence is never masked by the clipping.
    double operator()(Label y, double prediction) const noexcept;
    /// d loss / d prediction; zero on the flat pieces and at the kinks.
    double derivative(Label y, double prediction) const noexcept;

private:
    LossFunction(LossKind kind, double slope) noexcept : kind_(kind), slope_(slope) {}

    LossKind kind_;
    double slope_;
};

/// Real-valued function on R^input_dim.
class Predictor {
public:
    using Fn = std::function<double(std::span<const double>)>;

    Predictor(std::size_t input_dim, Fn fn) : input_dim_(input_dim), fn_(std::move(fn)) {}

    std::size_t input_dim() const noexcept { return input_dim_; }
    double operator()(std::span<const double> x) const { return fn_(x); }

    static Predictor constant(std::size_t input_dim, double value);

private:
    std::size_t input_dim_;
    Fn fn_;
};

double empirical_risk(const Predictor& f, const Dataset& data, const LossFunction& loss);

struct GapReport {
    double train_risk = 0.0;
    double test_risk = 0.0;
    double gap = 0.0;
};

/// |L_train - L_test|; the held-out risk stands in for the unobservable population risk.
GapReport generalization_gap(const Predictor& f, const Dataset& train, const Dataset& test, const LossFunction& loss);

/// Balanced two-class Gaussian mixture. Each class owns `clusters_per_class` centers drawn from
/// N(0, center_spread^2 I); points are center + N(0, I). The whole sample is then scaled by one common
/// factor so the largest norm equals norm_bound.
Dataset synth_gaussian_mixture(std::uint64_t seed, std::size_t m, std::size_t d, std::size_t clusters_per_class,
                               double norm_bound, double center_spread = 3.0);

/// Seeded disjoint partition; train side gets round(train_fraction * size) examples.
std::pair<Dataset, Dataset> train_test_split(std::uint64_t seed, const Dataset& data, double train_fraction);
std::pair<Dataset, Dataset> split_by_count(std::uint64_t seed, const Dataset& data, std::size_t train_count);

/// CSV with header `y,x1,...,xd`, labels `+1`/`-1`, 17 significant digits.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in, double norm_bound);

}  // namespace smoe
