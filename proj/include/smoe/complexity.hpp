// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0
//
// Complexity quantities consumed by the generalization bound, plus exhaustive verifiers for the
// classical lemmas the bound rests on (Natarajan growth, Lipschitz contraction, convex-hull invariance
// of Rademacher complexity, and the (T choose k) <= (eT/k)^k estimate).
//
// Finite hypothesis classes are represented by their behavior on a fixed sample: row i of a table holds
// hypothesis i's outputs on the m sample points.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "smoe/learning.hpp"
#include "smoe/matrix.hpp"

namespace smoe {

enum class EstimateMethod { monte_carlo, exact_enumeration, closed_form_bound };

std::string to_string(EstimateMethod method);

struct ComplexityEstimate {
    double value = 0.0;
    EstimateMethod method = EstimateMethod::closed_form_bound;
    /// Standard error of the mean; zero unless method == monte_carlo.
    double std_error = 0.0;
    /// Number of Monte-Carlo draws; zero otherwise.
    std::size_t draws = 0;

    static ComplexityEstimate exact(double value) { return {value, EstimateMethod::exact_enumeration, 0.0, 0}; }
    static ComplexityEstimate closed_form(double value) { return {value, EstimateMethod::closed_form_bound, 0.0, 0}; }
};

inline constexpr std::size_t kMaxTablePoints = 20;
inline constexpr std::size_t kMaxTableRows = 4096;

/// Integer-valued finite class: n hypotheses x m points, entries in [0, arity).
class FiniteClassTable {
public:
    FiniteClassTable(std::size_t points, int arity, std::vector<std::vector<int>> behaviors);

    /// Every function from `points` points into [0, arity).
    static FiniteClassTable full(std::size_t points, int arity);

    std::size_t rows() const noexcept { return behaviors_.size(); }
    std::size_t points() const noexcept { return points_; }
    int arity() const noexcept { return arity_; }
    const std::vector<int>& behavior(std::size_t i) const { return behaviors_.at(i); }
    const std::vector<std::vector<int>>& behaviors() const noexcept { return behaviors_; }

    /// Outputs mapped affinely onto [-1, 1]: v -> -1 + 2v/(arity-1). Binary classes become +/-1
    /// (0 -> -1, 1 -> +1). A unary class maps to 0.
    Matrix real_outputs() const;

    friend bool operator==(const FiniteClassTable&, const FiniteClassTable&) = default;

private:
    std::size_t points_;
    int arity_;
    std::vector<std::vector<int>> behaviors_;
};

/// CSV: header `m=<int>,arity=<int>`, then one hypothesis per line with m integer outputs.
void write_class_table_csv(std::ostream& out, const FiniteClassTable& table);
FiniteClassTable read_class_table_csv(std::istream& in);

// ---------------------------------------------------------------------------------------------------------
// Empirical Rademacher complexity

/// E_sigma[ max_rows (1/m) sum_i sigma_i v(row, i) ] by enumerating all 2^m sign vectors.
/// `values` is n x m (one hypothesis per row). Requires m <= 20.
ComplexityEstimate empirical_rademacher_exact(const Matrix& values);
ComplexityEstimate empirical_rademacher_exact(const FiniteClassTable& table);

/// Maps a sign vector (entries +/-1) to sup_f (1/m) sum_i sigma_i f(z_i).
using SupEvaluator = std::function<double(std::span<const double>)>;

SupEvaluator class_sup_evaluator(const Matrix& values);

/// Sign vector of Monte-Carlo draw `draw`; depends only on (seed, draw).
std::vector<double> rademacher_signs(std::uint64_t seed, std::uint64_t draw, std::size_t m);

/// Mean of per-draw suprema with standard error sd/sqrt(draws). draws >= 100.
ComplexityEstimate empirical_rademacher_mc(const SupEvaluator& sup, std::size_t m, std::size_t draws,
                                           std::uint64_t seed);

// ---------------------------------------------------------------------------------------------------------
// Matrix norms and the norm-based bound for ReLU networks

struct SpectralNormOptions {
    std::size_t max_iterations = 200;
    double relative_tolerance = 1e-12;
    std::uint64_t restart_seed = 0x5eed;
};

/// Largest singular value by power iteration on A^T A, started from the normalized all-ones vector,
/// with one restart from a seeded random vector if the first run stalls or fails to converge.
double spectral_norm(const Matrix& a, const SpectralNormOptions& options = {});

/// Sum of the Euclidean norms of the rows of `a`.
double norm_21(const Matrix& a) noexcept;

/// Per-layer spectral bounds K_i, per-layer (2,1) bounds b_i and the input norm bound c.
class NormBudget {
public:
    NormBudget(std::vector<double> spectral, std::vector<double> norm21, double input_bound);

    std::size_t depth() const noexcept { return spectral_.size(); }
    const std::vector<double>& spectral() const noexcept { return spectral_; }
    const std::vector<double>& norm21() const noexcept { return norm21_; }
    double input_bound() const noexcept { return input_bound_; }

    friend bool operator==(const NormBudget&, const NormBudget&) = default;

private:
    std::vector<double> spectral_;
    std::vector<double> norm21_;
    double input_bound_;
};

/// (c / sqrt(m)) * prod_i K_i * (sum_i (b_i / K_i)^(2/3))^(3/2).
ComplexityEstimate bartlett_bound(const NormBudget& budget, std::size_t m);

// ---------------------------------------------------------------------------------------------------------
// Natarajan dimension and growth

/// constant * d * p^2: the ReLU-network Natarajan bound with d outputs and p parameters, up to the
/// (configurable) universal constant.
double natarajan_nn_bound(long long output_count, long long param_count, double constant = 1.0);

/// Largest multiclass-shattered subset of the table's points, by exhaustive search. Candidate witness
/// pairs (f0, f1) range over behaviors realized on the subset. Requires m <= 12.
std::size_t natarajan_dimension_exact(const FiniteClassTable& table);

/// Number of distinct behavior rows.
std::size_t growth_function(const FiniteClassTable& table);

struct GrowthCheck {
    std::size_t growth = 0;
    std::size_t natarajan_dim = 0;
    /// m^dN * arity^(2 dN)
    double bound = 0.0;
    bool holds = false;
};

GrowthCheck natarajan_growth_check(const FiniteClassTable& table);

// ---------------------------------------------------------------------------------------------------------
// Verifiers

struct HullCheck {
    double hull_value = 0.0;
    double base_value = 0.0;
};

/// Rademacher complexity of the convex hull, by enumerating sign vectors and maximizing over the
/// class rows plus every mixing vector on the simplex grid with `grid_resolution` divisions;
/// compared with the plain class value. Requires m <= 16 and a grid of at most kMaxHullGridPoints.
HullCheck convex_hull_rademacher_check(const Matrix& values, std::size_t grid_resolution = 10);
HullCheck convex_hull_rademacher_check(const FiniteClassTable& table, std::size_t grid_resolution = 10);

inline constexpr std::size_t kMaxHullGridPoints = 200000;

struct ContractionCheck {
    /// Exact empirical Rademacher complexity of the loss-composed class.
    double lhs = 0.0;
    /// Lipschitz constant times that of the base class.
    double rhs = 0.0;
};

/// Rejects losses without a finite Lipschitz constant.
ContractionCheck lipschitz_contraction_check(const Matrix& values, const LossFunction& loss,
                                             std::span<const Label> labels);

struct BinomialCheck {
    double log_binom = 0.0;
    /// k (1 + log(T/k))
    double bound = 0.0;
    bool holds = false;
};

/// Exact C(T, k) in 64-bit integers; 1 <= k <= T <= 30.
std::uint64_t binomial(unsigned t, unsigned k);
BinomialCheck binomial_log_bound_check(unsigned t, unsigned k);

// ---------------------------------------------------------------------------------------------------------
// Verification corpus

/// Seeded random classes sized for every exhaustive verifier: m in [1, 12], n in [1, 6], arity 2..4.
std::vector<FiniteClassTable> make_verification_corpus(std::uint64_t seed, std::size_t count);

/// +/-1 labels for contraction checks on class `index` of a corpus.
std::vector<Label> corpus_labels(std::uint64_t seed, std::size_t index, std::size_t m);

}  // namespace smoe
