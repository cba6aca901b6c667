// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "smoe/complexity.hpp"
#include "smoe/error.hpp"
#include "smoe/random.hpp"

namespace smoe {

namespace {

struct PowerRun {
    double sigma = 0.0;
    bool converged = false;
};

// v must have unit norm. Every iterate ||A v|| is a lower bound on the top singular value.
PowerRun power_iterate(const Matrix& a, std::vector<double> v, const SpectralNormOptions& opt) {
    PowerRun run;
    double previous = 0.0;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        const std::vector<double> av = a.multiply(v);
        const double sigma = l2_norm(av);
        if (sigma == 0.0) {
            return run;  // start vector lies in the null space
        }
        run.sigma = std::max(run.sigma, sigma);
        if (it > 0 && std::abs(sigma - previous) <= opt.relative_tolerance * sigma) {
            run.converged = true;
            return run;
        }
        previous = sigma;
        std::vector<double> next = a.multiply_transposed(av);
        const double n = l2_norm(next);
        if (n == 0.0) {
            return run;
        }
        for (std::size_t i = 0; i < next.size(); ++i) {
            v[i] = next[i] / n;
        }
    }
    return run;
}

}  // namespace

double spectral_norm(const Matrix& a, const SpectralNormOptions& options) {
    if (a.empty()) {
        throw InputError("spectral norm of an empty matrix");
    }
    if (!a.all_finite()) {
        throw InputError("spectral norm needs finite entries");
    }
    bool any_nonzero = false;
    for (double v : a.data()) {
        any_nonzero = any_nonzero || v != 0.0;
    }
    if (!any_nonzero) {
        return 0.0;
    }

    const std::size_t n = a.cols();
    std::vector<double> start(n, 1.0 / std::sqrt(static_cast<double>(n)));
    PowerRun run = power_iterate(a, std::move(start), options);
    if (run.converged) {
        return run.sigma;
    }

    Engine rng = make_engine(options.restart_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> restart(n);
    for (double& v : restart) {
        v = normal(rng);
    }
    const double norm = l2_norm(restart);
    for (double& v : restart) {
        v /= norm;
    }
    const PowerRun second = power_iterate(a, std::move(restart), options);
    return std::max(run.sigma, second.sigma);
}

double norm_21(const Matrix& a) noexcept {
    double total = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        total += l2_norm(a.row(r));
    }
    return total;
}

NormBudget::NormBudget(std::vector<double> spectral, std::vector<double> norm21, double input_bound)
    : spectral_(std::move(spectral)), norm21_(std::move(norm21)), input_bound_(input_bound) {
    if (spectral_.empty()) {
        throw InputError("norm budget needs at least one layer");
    }
    if (spectral_.size() != norm21_.size()) {
        throw InputError("norm budget has " + std::to_string(spectral_.size()) + " spectral bounds but " +
                         std::to_string(norm21_.size()) + " (2,1) bounds");
    }
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    for (std::size_t i = 0; i < spectral_.size(); ++i) {
        if (!positive(spectral_[i])) {
            throw InputError("spectral bound K_" + std::to_string(i + 1) + " must be positive and finite");
        }
        if (!positive(norm21_[i])) {
            throw InputError("(2,1) bound b_" + std::to_string(i + 1) + " must be positive and finite");
        }
    }
    if (!positive(input_bound_)) {
        throw InputError("input norm bound c must be positive and finite");
    }
}

ComplexityEstimate bartlett_bound(const NormBudget& budget, std::size_t m) {
    if (m < 1) {
        throw InputError("sample count m must be at least 1");
    }
    const auto& k = budget.spectral();
    const auto& b = budget.norm21();
    const double root_m = std::sqrt(static_cast<double>(m));
    if (budget.depth() == 1) {
        // K_1 * ((b_1/K_1)^(2/3))^(3/2) = b_1; evaluated without the pow round trip.
        return ComplexityEstimate::closed_form(budget.input_bound() * b[0] / root_m);
    }
    double product = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        product *= k[i];
        sum += std::pow(b[i] / k[i], 2.0 / 3.0);
    }
    const double value = budget.input_bound() * product * std::pow(sum, 1.5) / root_m;
    return ComplexityEstimate::closed_form(value);
}

double natarajan_nn_bound(long long output_count, long long param_count, double constant) {
    if (output_count < 0 || param_count < 0) {
        throw InputError("Natarajan network bound needs nonnegative output and parameter counts");
    }
    if (!(constant >= 0.0) || !std::isfinite(constant)) {
        throw InputError("Natarajan big-O constant must be nonnegative and finite");
    }
    const auto p = static_cast<double>(param_count);
    return constant * static_cast<double>(output_count) * p * p;
}

}  // namespace smoe
