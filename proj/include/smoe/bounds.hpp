// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0
//
// Generalization bound for a sparse mixture of T experts with k active per input:
//
//   4 C R_m(H) + 2 sqrt( (2 k dN (1 + log(T/k)) + dN log(2m) + log(4/delta)) / (2m) )
//
// evaluated with the leading big-O constant set to 1 and natural logarithms. All values are therefore
// "up to universal constants" and meant for comparisons across (k, T, m, ...).

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smoe/complexity.hpp"

namespace smoe {

inline constexpr const char* kBoundScopeNote = "bound up to universal constants (big-O constant = 1, natural log)";

struct BoundInputs {
    /// Lipschitz constant of the loss.
    double lipschitz = 1.0;
    /// Rademacher complexity of the expert class.
    ComplexityEstimate rademacher;
    /// Natarajan dimension of the router's sparse patterns (may itself be a bound).
    double natarajan_dim = 0.0;
    std::size_t m = 1;
    std::size_t experts = 1;
    std::size_t k = 1;
    double delta = 0.05;

    /// Throws InputError naming the offending field.
    void validate() const;
};

struct BoundBreakdown {
    double rademacher_term = 0.0;  // 4 C R
    double sparsity_term = 0.0;    // 2 k dN (1 + log(T/k))
    double sample_term = 0.0;      // dN log(2m)
    double confidence_term = 0.0;  // log(4/delta)
    double total = 0.0;

    /// 4 C stderr when R is a Monte-Carlo estimate, else 0; total lies in [total_lower, total_upper].
    double rademacher_band = 0.0;
    double total_lower = 0.0;
    double total_upper = 0.0;
};

BoundBreakdown theorem1_bound(const BoundInputs& inputs);

/// ReLU experts under a norm budget and a ReLU router with `router_outputs` outputs and
/// `router_params` parameters.
struct NetworkBoundInputs {
    NormBudget expert_budget;
    long long router_outputs = 1;
    long long router_params = 0;
    std::size_t m = 1;
    std::size_t experts = 1;
    std::size_t k = 1;
    double delta = 0.05;
    double lipschitz = 1.0;
    double natarajan_constant = 1.0;
};

/// theorem1_bound with R = bartlett_bound(budget, m) and dN = natarajan_nn_bound(outputs, params, constant).
BoundBreakdown corollary1_bound(const NetworkBoundInputs& inputs);

struct SparsityRow {
    std::size_t k = 0;
    /// 2 sqrt((2 k dN (1 + log(T/k)) + dN log(2m) + log(4/delta)) / (2m))
    double radical = 0.0;
};

std::vector<SparsityRow> sparsity_profile(double natarajan_dim, std::size_t m, std::size_t experts, double delta);

/// Axis values for a bound sweep. Rows are emitted in lexicographic order with k outermost, then T, m,
/// dN, C, R, delta.
struct SweepGrid {
    std::vector<std::size_t> k{1};
    std::vector<std::size_t> experts{1};
    std::vector<std::size_t> m{1000};
    std::vector<double> natarajan_dim{0.0};
    std::vector<double> lipschitz{1.0};
    std::vector<double> rademacher{0.0};
    std::vector<double> delta{0.05};

    std::size_t size() const noexcept;
};

struct SweepRow {
    BoundInputs inputs;
    /// Empty when the grid point is invalid; `error` then says why.
    std::optional<BoundBreakdown> result;
    std::string error;
};

std::vector<SweepRow> sweep(const SweepGrid& grid);

/// `k,T,m,dN,C,R,delta,rademacher_term,sparsity_term,sample_term,confidence_term,total`
std::string bound_csv_header();
/// One data row in the header's column order. Invalid rows carry `nan` in the five computed columns.
std::string bound_csv_row(const BoundInputs& inputs, const std::optional<BoundBreakdown>& result);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace smoe
