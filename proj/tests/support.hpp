// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles and hand-rolled generators shared by the test binaries. Nothing here calls the
// library routine it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "smoe/complexity.hpp"
#include "smoe/learning.hpp"
#include "smoe/matrix.hpp"
#include "smoe/model.hpp"
#include "smoe/random.hpp"

namespace smoe::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
    Matrix a(rows, cols);
    std::normal_distribution<double> n(0.0, scale);
    for (double& v : a.data()) {
        v = n(rng);
    }
    return a;
}

inline DenseNet random_net(Rng& rng, std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
    std::vector<Matrix> layers;
    std::size_t w = in;
    for (std::size_t h : hidden) {
        layers.push_back(random_matrix(rng, h, w));
        w = h;
    }
    layers.push_back(random_matrix(rng, out, w));
    return DenseNet(std::move(layers));
}

inline std::vector<std::size_t> random_widths(Rng& rng, std::size_t max_layers, std::size_t max_width) {
    std::vector<std::size_t> widths(pick(rng, 0, max_layers));
    for (auto& w : widths) {
        w = pick(rng, 1, max_width);
    }
    return widths;
}

inline SMoEModel random_model(Rng& rng, std::size_t d, std::size_t t, std::size_t k, std::size_t max_layers = 2,
                              std::size_t max_width = 6) {
    std::vector<DenseNet> experts;
    for (std::size_t j = 0; j < t; ++j) {
        experts.push_back(random_net(rng, d, random_widths(rng, max_layers, max_width), 1));
    }
    return SMoEModel(std::move(experts), random_net(rng, d, random_widths(rng, max_layers, max_width), t), k);
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    std::normal_distribution<double> g(0.0, scale);
    for (double& x : v) {
        x = g(rng);
    }
    return v;
}

inline Dataset random_dataset(Rng& rng, std::size_t m, std::size_t d, double c = 1.0) {
    std::vector<LabeledExample> ex;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> x = random_vector(rng, d);
        double n = 0.0;
        for (double v : x) {
            n += v * v;
        }
        n = std::sqrt(n);
        const double r = c * uniform(rng, 0.05, 1.0);
        for (double& v : x) {
            v = n > 0.0 ? v * r / n : 0.0;
        }
        ex.push_back({x, rng() % 2 == 0 ? Label::positive : Label::negative});
    }
    return Dataset(std::move(ex), c);
}

// Plain triple-loop forward pass.
inline std::vector<double> oracle_net(const DenseNet& net, const std::vector<double>& x) {
    std::vector<double> a = x;
    const auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Matrix& w = layers[l];
        std::vector<double> z(w.rows(), 0.0);
        for (std::size_t r = 0; r < w.rows(); ++r) {
            for (std::size_t c = 0; c < w.cols(); ++c) {
                z[r] += w(r, c) * a[c];
            }
        }
        if (l + 1 < layers.size()) {
            for (double& v : z) {
                v = v > 0.0 ? v : 0.0;
            }
        }
        a = std::move(z);
    }
    return a;
}

// Full mixture: every expert evaluated, weights from a stable sort on (-logit, index), softmax over the top k.
inline double oracle_mixture(const SMoEModel& model, const std::vector<double>& x) {
    const std::vector<double> g = oracle_net(model.router(), x);
    std::vector<std::size_t> idx(g.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
    std::vector<double> a(g.size(), 0.0);
    const double top = g[idx[0]];
    double z = 0.0;
    for (std::size_t s = 0; s < model.k(); ++s) {
        a[idx[s]] = std::exp(g[idx[s]] - top);
        z += a[idx[s]];
    }
    double f = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        f += (a[j] / z) * oracle_net(model.expert(j), x)[0];
    }
    return f;
}

// Exact empirical Rademacher complexity by recursion over sign prefixes.
inline double oracle_rademacher(const Matrix& values) {
    const std::size_t n = values.rows();
    const std::size_t m = values.cols();
    std::vector<double> partial(n, 0.0);
    double total = 0.0;
    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == m) {
            total += *std::max_element(partial.begin(), partial.end());
            return;
        }
        for (double s : {-1.0, 1.0}) {
            for (std::size_t r = 0; r < n; ++r) {
                partial[r] += s * values(r, i);
            }
            self(self, i + 1);
            for (std::size_t r = 0; r < n; ++r) {
                partial[r] -= s * values(r, i);
            }
        }
    };
    recurse(recurse, 0);
    return total / (std::ldexp(1.0, static_cast<int>(m)) * static_cast<double>(m));
}

// Singular values by one-sided Jacobi rotations on the columns, sorted descending.
inline std::vector<double> jacobi_singular_values(const Matrix& a) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::vector<std::vector<double>> u(cols, std::vector<double>(rows));
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows; ++r) {
            u[c][r] = a(r, c);
        }
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                double gamma = 0.0;
                for (std::size_t r = 0; r < rows; ++r) {
                    alpha += u[p][r] * u[p][r];
                    beta += u[q][r] * u[q][r];
                    gamma += u[p][r] * u[q][r];
                }
                if (gamma == 0.0) {
                    continue;
                }
                off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t r = 0; r < rows; ++r) {
                    const double up = u[p][r];
                    const double uq = u[q][r];
                    u[p][r] = cs * up - sn * uq;
                    u[q][r] = sn * up + cs * uq;
                }
            }
        }
        if (off < 1e-15) {
            break;
        }
    }
    std::vector<double> s(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        double n = 0.0;
        for (double v : u[c]) {
            n += v * v;
        }
        s[c] = std::sqrt(n);
    }
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

inline FiniteClassTable table_of(std::size_t m, int arity, std::vector<std::vector<int>> rows) {
    return FiniteClassTable(m, arity, std::move(rows));
}

}  // namespace smoe::testing
