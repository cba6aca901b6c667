// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include "smoe/bounds.hpp"

#include <cmath>
#include <ostream>

#include "smoe/error.hpp"
#include "smoe/text_format.hpp"

namespace smoe {

namespace {

bool nonneg_finite(double v) { return v >= 0.0 && std::isfinite(v); }

double radical(double sparsity, double sample, double confidence, std::size_t m) {
    return 2.0 * std::sqrt((sparsity + sample + confidence) / (2.0 * static_cast<double>(m)));
}

double sparsity_term(std::size_t k, double dn, std::size_t t) {
    const auto kd = static_cast<double>(k);
    return 2.0 * kd * dn * (1.0 + std::log(static_cast<double>(t) / kd));
}

}  // namespace

void BoundInputs::validate() const {
    if (!nonneg_finite(lipschitz)) {
        throw InputError("C (loss Lipschitz constant) must be nonnegative and finite");
    }
    if (!nonneg_finite(rademacher.value)) {
        throw InputError("R (expert Rademacher complexity) must be nonnegative and finite");
    }
    if (!nonneg_finite(rademacher.std_error)) {
        throw InputError("R standard error must be nonnegative and finite");
    }
    if (!nonneg_finite(natarajan_dim)) {
        throw InputError("dN (router Natarajan dimension) must be nonnegative and finite");
    }
    if (m < 1) {
        throw InputError("m (training sample count) must be at least 1");
    }
    if (experts < 1) {
        throw InputError("T (expert count) must be at least 1");
    }
    if (k < 1 || k > experts) {
        throw InputError("k must satisfy 1 <= k <= T, got k=" + std::to_string(k) + ", T=" + std::to_string(experts));
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InputError("delta must lie in (0, 1), got " + format_real(delta));
    }
}

BoundBreakdown theorem1_bound(const BoundInputs& in) {
    in.validate();
    BoundBreakdown b;
    b.rademacher_term = 4.0 * in.lipschitz * in.rademacher.value;
    b.sparsity_term = sparsity_term(in.k, in.natarajan_dim, in.experts);
    b.sample_term = in.natarajan_dim * std::log(2.0 * static_cast<double>(in.m));
    b.confidence_term = std::log(4.0 / in.delta);
    b.total = b.rademacher_term + radical(b.sparsity_term, b.sample_term, b.confidence_term, in.m);
    b.rademacher_band = in.rademacher.method == EstimateMethod::monte_carlo
                            ? 4.0 * in.lipschitz * in.rademacher.std_error
                            : 0.0;
    b.total_lower = std::max(0.0, b.total - b.rademacher_band);
    b.total_upper = b.total + b.rademacher_band;
    return b;
}

BoundBreakdown corollary1_bound(const NetworkBoundInputs& in) {
    BoundInputs t;
    t.lipschitz = in.lipschitz;
    t.rademacher = bartlett_bound(in.expert_budget, in.m);
    t.natarajan_dim = natarajan_nn_bound(in.router_outputs, in.router_params, in.natarajan_constant);
    t.m = in.m;
    t.experts = in.experts;
    t.k = in.k;
    t.delta = in.delta;
    return theorem1_bound(t);
}

std::vector<SparsityRow> sparsity_profile(double natarajan_dim, std::size_t m, std::size_t experts, double delta) {
    BoundInputs probe;
    probe.natarajan_dim = natarajan_dim;
    probe.m = m;
    probe.experts = experts;
    probe.k = 1;
    probe.delta = delta;
    probe.validate();

    const double sample = natarajan_dim * std::log(2.0 * static_cast<double>(m));
    const double confidence = std::log(4.0 / delta);
    std::vector<SparsityRow> rows;
    rows.reserve(experts);
    for (std::size_t k = 1; k <= experts; ++k) {
        rows.push_back({k, radical(sparsity_term(k, natarajan_dim, experts), sample, confidence, m)});
    }
    return rows;
}

std::size_t SweepGrid::size() const noexcept {
    return k.size() * experts.size() * m.size() * natarajan_dim.size() * lipschitz.size() * rademacher.size() *
           delta.size();
}

std::vector<SweepRow> sweep(const SweepGrid& grid) {
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (std::size_t k : grid.k) {
        for (std::size_t t : grid.experts) {
            for (std::size_t m : grid.m) {
                for (double dn : grid.natarajan_dim) {
                    for (double c : grid.lipschitz) {
                        for (double r : grid.rademacher) {
                            for (double delta : grid.delta) {
                                SweepRow row;
                                row.inputs.lipschitz = c;
                                row.inputs.rademacher = ComplexityEstimate::closed_form(r);
                                row.inputs.natarajan_dim = dn;
                                row.inputs.m = m;
                                row.inputs.experts = t;
                                row.inputs.k = k;
                                row.inputs.delta = delta;
                                try {
                                    row.result = theorem1_bound(row.inputs);
                                } catch (const InputError& e) {
                                    row.error = e.what();
                                }
                                rows.push_back(std::move(row));
                            }
                        }
                    }
                }
            }
        }
    }
    return rows;
}

std::string bound_csv_header() {
    return "k,T,m,dN,C,R,delta,rademacher_term,sparsity_term,sample_term,confidence_term,total";
}

std::string bound_csv_row(const BoundInputs& in, const std::optional<BoundBreakdown>& result) {
    std::string line = std::to_string(in.k) + ',' + std::to_string(in.experts) + ',' + std::to_string(in.m) + ',' +
                       format_real(in.natarajan_dim) + ',' + format_real(in.lipschitz) + ',' +
                       format_real(in.rademacher.value) + ',' + format_real(in.delta);
    if (result) {
        for (double v : {result->rademacher_term, result->sparsity_term, result->sample_term, result->confidence_term,
                         result->total}) {
            line += ',' + format_real(v);
        }
    } else {
        line += ",nan,nan,nan,nan,nan";
    }
    return line;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << bound_csv_header() << '\n';
    for (const auto& row : rows) {
        out << bound_csv_row(row.inputs, row.result) << '\n';
    }
}

}  // namespace smoe
