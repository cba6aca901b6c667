// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include "smoe/complexity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "smoe/error.hpp"
#include "smoe/random.hpp"
#include "smoe/text_format.hpp"

namespace smoe {

std::string to_string(EstimateMethod method) {
    switch (method) {
        case EstimateMethod::monte_carlo: return "monte_carlo";
        case EstimateMethod::exact_enumeration: return "exact_enumeration";
        case EstimateMethod::closed_form_bound: return "closed_form_bound";
    }
    return "unknown";
}

FiniteClassTable::FiniteClassTable(std::size_t points, int arity, std::vector<std::vector<int>> behaviors)
    : points_(points), arity_(arity), behaviors_(std::move(behaviors)) {
    if (points_ < 1) {
        throw InputError("class table needs at least one sample point");
    }
    if (arity_ < 1) {
        throw InputError("class table arity must be at least 1");
    }
    if (behaviors_.empty()) {
        throw InputError("class table needs at least one hypothesis");
    }
    if (points_ > kMaxTablePoints || behaviors_.size() > kMaxTableRows) {
        throw CapacityError("class table limited to m <= " + std::to_string(kMaxTablePoints) + " points and n <= " +
                            std::to_string(kMaxTableRows) + " hypotheses");
    }
    for (std::size_t i = 0; i < behaviors_.size(); ++i) {
        if (behaviors_[i].size() != points_) {
            throw InputError("hypothesis " + std::to_string(i) + " has " + std::to_string(behaviors_[i].size()) +
                             " outputs, expected m=" + std::to_string(points_));
        }
        for (int v : behaviors_[i]) {
            if (v < 0 || v >= arity_) {
                throw InputError("hypothesis " + std::to_string(i) + " output " + std::to_string(v) +
                                 " outside [0, " + std::to_string(arity_) + ")");
            }
        }
    }
}

FiniteClassTable FiniteClassTable::full(std::size_t points, int arity) {
    if (arity < 1 || points < 1) {
        throw InputError("full class needs m >= 1 and arity >= 1");
    }
    double count = std::pow(static_cast<double>(arity), static_cast<double>(points));
    if (count > static_cast<double>(kMaxTableRows)) {
        throw CapacityError("full class would have more than " + std::to_string(kMaxTableRows) + " rows");
    }
    const auto n = static_cast<std::size_t>(count);
    std::vector<std::vector<int>> rows(n, std::vector<int>(points));
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t code = r;
        for (std::size_t i = 0; i < points; ++i) {
            rows[r][i] = static_cast<int>(code % static_cast<std::size_t>(arity));
            code /= static_cast<std::size_t>(arity);
        }
    }
    return FiniteClassTable(points, arity, std::move(rows));
}

Matrix FiniteClassTable::real_outputs() const {
    Matrix out(rows(), points_);
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t i = 0; i < points_; ++i) {
            out(r, i) = arity_ == 1 ? 0.0 : -1.0 + 2.0 * behaviors_[r][i] / static_cast<double>(arity_ - 1);
        }
    }
    return out;
}

void write_class_table_csv(std::ostream& out, const FiniteClassTable& table) {
    out << "m=" << table.points() << ",arity=" << table.arity() << '\n';
    for (const auto& row : table.behaviors()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << '\n';
    }
}

FiniteClassTable read_class_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("class table file is empty");
    }
    const auto header = split(trim(line), ',');
    auto field = [&](std::size_t idx, std::string_view key) -> long long {
        if (idx >= header.size()) {
            throw InputError("class table header must be m=<int>,arity=<int>");
        }
        const auto item = trim(header[idx]);
        if (item.substr(0, key.size()) != key || item.size() <= key.size() || item[key.size()] != '=') {
            throw InputError("class table header must be m=<int>,arity=<int>");
        }
        return parse_integer(item.substr(key.size() + 1));
    };
    if (header.size() != 2) {
        throw InputError("class table header must be m=<int>,arity=<int>");
    }
    const long long m = field(0, "m");
    const long long arity = field(1, "arity");
    if (m < 1 || arity < 1 || arity > std::numeric_limits<int>::max()) {
        throw InputError("class table header values out of range");
    }
    std::vector<std::vector<int>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(trim(line), ',');
        if (fields.size() != static_cast<std::size_t>(m)) {
            throw InputError("class table line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                             " entries, expected " + std::to_string(m));
        }
        std::vector<int> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            const long long v = parse_integer(f);
            if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
                throw InputError("class table entry out of range on line " + std::to_string(line_no));
            }
            row.push_back(static_cast<int>(v));
        }
        rows.push_back(std::move(row));
    }
    return FiniteClassTable(static_cast<std::size_t>(m), static_cast<int>(arity), std::move(rows));
}

// ---------------------------------------------------------------------------------------------------------

namespace {

void require_enumerable(const Matrix& values, std::size_t max_points) {
    if (values.rows() == 0 || values.cols() == 0) {
        throw InputError("class needs at least one hypothesis and one point");
    }
    if (values.cols() > max_points) {
        throw CapacityError("exhaustive enumeration limited to m <= " + std::to_string(max_points) + " points, got " +
                            std::to_string(values.cols()));
    }
    if (!values.all_finite()) {
        throw InputError("class outputs must be finite");
    }
}

double row_correlation(const Matrix& values, std::size_t r, std::uint64_t mask) {
    const auto row = values.row(r);
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        acc += ((mask >> i) & 1U) ? row[i] : -row[i];
    }
    return acc;
}

}  // namespace

ComplexityEstimate empirical_rademacher_exact(const Matrix& values) {
    require_enumerable(values, kMaxTablePoints);
    const std::size_t m = values.cols();
    const std::uint64_t count = std::uint64_t{1} << m;
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < values.rows(); ++r) {
            best = std::max(best, row_correlation(values, r, mask));
        }
        total += best;
    }
    return ComplexityEstimate::exact(total / (static_cast<double>(m) * static_cast<double>(count)));
}

ComplexityEstimate empirical_rademacher_exact(const FiniteClassTable& table) {
    return empirical_rademacher_exact(table.real_outputs());
}

SupEvaluator class_sup_evaluator(const Matrix& values) {
    if (values.rows() == 0 || values.cols() == 0) {
        throw InputError("class needs at least one hypothesis and one point");
    }
    return [values](std::span<const double> sigma) {
        if (sigma.size() != values.cols()) {
            throw InputError("sign vector length differs from the class sample size");
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < values.rows(); ++r) {
            const auto row = values.row(r);
            double acc = 0.0;
            for (std::size_t i = 0; i < row.size(); ++i) {
                acc += sigma[i] * row[i];
            }
            best = std::max(best, acc);
        }
        return best / static_cast<double>(values.cols());
    };
}

std::vector<double> rademacher_signs(std::uint64_t seed, std::uint64_t draw, std::size_t m) {
    std::vector<double> sigma(m);
    std::uint64_t state = stream_seed(seed, draw);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (i % 64 == 0) {
            state = splitmix64(state);
            bits = state;
        }
        sigma[i] = (bits & 1U) ? 1.0 : -1.0;
        bits >>= 1;
    }
    return sigma;
}

ComplexityEstimate empirical_rademacher_mc(const SupEvaluator& sup, std::size_t m, std::size_t draws,
                                           std::uint64_t seed) {
    if (draws < 100) {
        throw InputError("Monte-Carlo Rademacher estimate needs at least 100 draws, got " + std::to_string(draws));
    }
    if (m < 1) {
        throw InputError("sample size m must be at least 1");
    }
    std::vector<double> samples(draws);
    for (std::size_t t = 0; t < draws; ++t) {
        samples[t] = sup(rademacher_signs(seed, t, m));
    }
    double mean = 0.0;
    for (double v : samples) {
        mean += v;
    }
    mean /= static_cast<double>(draws);
    double ss = 0.0;
    for (double v : samples) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(draws - 1));
    ComplexityEstimate est;
    est.value = mean;
    est.method = EstimateMethod::monte_carlo;
    est.std_error = sd / std::sqrt(static_cast<double>(draws));
    est.draws = draws;
    return est;
}

// ---------------------------------------------------------------------------------------------------------

namespace {

using Behavior = std::vector<int>;

std::vector<Behavior> restricted_behaviors(const FiniteClassTable& table, std::span<const std::size_t> positions) {
    std::vector<Behavior> out;
    out.reserve(table.rows());
    for (const auto& row : table.behaviors()) {
        Behavior b(positions.size());
        for (std::size_t t = 0; t < positions.size(); ++t) {
            b[t] = row[positions[t]];
        }
        out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool shattered_by_pair(const std::vector<Behavior>& realized, const Behavior& f0, const Behavior& f1) {
    const std::size_t s = f0.size();
    Behavior pattern(s);
    for (std::uint64_t chooser = 0; chooser < (std::uint64_t{1} << s); ++chooser) {
        for (std::size_t t = 0; t < s; ++t) {
            pattern[t] = ((chooser >> t) & 1U) ? f0[t] : f1[t];
        }
        if (!std::binary_search(realized.begin(), realized.end(), pattern)) {
            return false;
        }
    }
    return true;
}

bool subset_shattered(const FiniteClassTable& table, std::span<const std::size_t> positions) {
    const auto realized = restricted_behaviors(table, positions);
    if (realized.size() < (std::size_t{1} << positions.size())) {
        return false;
    }
    for (std::size_t a = 0; a < realized.size(); ++a) {
        for (std::size_t b = a + 1; b < realized.size(); ++b) {
            bool disjoint = true;
            for (std::size_t t = 0; t < positions.size() && disjoint; ++t) {
                disjoint = realized[a][t] != realized[b][t];
            }
            // The (f0, f1) and (f1, f0) witnesses demand the same patterns.
            if (disjoint && shattered_by_pair(realized, realized[a], realized[b])) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

std::size_t growth_function(const FiniteClassTable& table) {
    auto rows = table.behaviors();
    std::sort(rows.begin(), rows.end());
    return static_cast<std::size_t>(std::unique(rows.begin(), rows.end()) - rows.begin());
}

std::size_t natarajan_dimension_exact(const FiniteClassTable& table) {
    constexpr std::size_t kMaxPoints = 12;
    const std::size_t m = table.points();
    if (m > kMaxPoints) {
        throw CapacityError("exhaustive Natarajan search limited to m <= 12 points, got " + std::to_string(m));
    }
    const std::size_t distinct = growth_function(table);
    std::size_t best = 0;
    // Subsets of a shattered set are shattered, so the search can stop at the first empty size.
    for (std::size_t s = 1; s <= m && (std::size_t{1} << s) <= distinct; ++s) {
        bool found = false;
        std::vector<std::size_t> positions;
        for (std::uint32_t mask = 0; mask < (1U << m) && !found; ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != s) {
                continue;
            }
            positions.clear();
            for (std::size_t i = 0; i < m; ++i) {
                if ((mask >> i) & 1U) {
                    positions.push_back(i);
                }
            }
            found = subset_shattered(table, positions);
        }
        if (!found) {
            break;
        }
        best = s;
    }
    return best;
}

GrowthCheck natarajan_growth_check(const FiniteClassTable& table) {
    GrowthCheck check;
    check.growth = growth_function(table);
    check.natarajan_dim = natarajan_dimension_exact(table);
    const auto d = static_cast<double>(check.natarajan_dim);
    check.bound = std::pow(static_cast<double>(table.points()), d) *
                  std::pow(static_cast<double>(table.arity()), 2.0 * d);
    check.holds = static_cast<double>(check.growth) <= check.bound;
    return check;
}

// ---------------------------------------------------------------------------------------------------------

namespace {

void compositions(std::size_t parts, std::size_t total, std::vector<std::size_t>& current,
                  std::vector<std::vector<std::size_t>>& out) {
    if (current.size() + 1 == parts) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (std::size_t v = 0; v <= total; ++v) {
        current.push_back(v);
        compositions(parts, total - v, current, out);
        current.pop_back();
    }
}

}  // namespace

HullCheck convex_hull_rademacher_check(const Matrix& values, std::size_t grid_resolution) {
    constexpr std::size_t kMaxPoints = 16;
    require_enumerable(values, kMaxPoints);
    if (grid_resolution < 1) {
        throw InputError("simplex grid resolution must be at least 1");
    }
    const std::size_t n = values.rows();
    const std::size_t m = values.cols();

    // Grid size is C(resolution + n - 1, n - 1).
    double grid_size = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        grid_size = grid_size * static_cast<double>(grid_resolution + i) / static_cast<double>(i);
        if (grid_size > static_cast<double>(kMaxHullGridPoints)) {
            throw CapacityError("simplex grid over " + std::to_string(n) + " hypotheses at resolution " +
                                std::to_string(grid_resolution) + " exceeds " + std::to_string(kMaxHullGridPoints) +
                                " points");
        }
    }
    std::vector<std::vector<std::size_t>> grid;
    std::vector<std::size_t> scratch;
    compositions(n, grid_resolution, scratch, grid);
    std::vector<double> lambdas;
    lambdas.reserve(grid.size() * n);
    for (const auto& g : grid) {
        for (std::size_t c : g) {
            lambdas.push_back(static_cast<double>(c) / static_cast<double>(grid_resolution));
        }
    }

    const std::uint64_t count = std::uint64_t{1} << m;
    std::vector<double> corr(n);
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < n; ++r) {
            corr[r] = row_correlation(values, r, mask);
            best = std::max(best, corr[r]);
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double* lambda = lambdas.data() + g * n;
            double mix = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                mix += lambda[r] * corr[r];
            }
            best = std::max(best, mix);
        }
        total += best;
    }

    HullCheck check;
    check.hull_value = total / (static_cast<double>(m) * static_cast<double>(count));
    check.base_value = empirical_rademacher_exact(values).value;
    return check;
}

HullCheck convex_hull_rademacher_check(const FiniteClassTable& table, std::size_t grid_resolution) {
    return convex_hull_rademacher_check(table.real_outputs(), grid_resolution);
}

ContractionCheck lipschitz_contraction_check(const Matrix& values, const LossFunction& loss,
                                             std::span<const Label> labels) {
    if (!loss.has_finite_lipschitz()) {
        throw InputError("contraction check needs a loss with a finite Lipschitz constant; " + loss.name() +
                         " has none");
    }
    require_enumerable(values, kMaxTablePoints);
    if (labels.size() != values.cols()) {
        throw InputError("contraction check needs one label per sample point");
    }
    Matrix composed(values.rows(), values.cols());
    for (std::size_t r = 0; r < values.rows(); ++r) {
        for (std::size_t i = 0; i < values.cols(); ++i) {
            composed(r, i) = loss(labels[i], values(r, i));
        }
    }
    ContractionCheck check;
    check.lhs = empirical_rademacher_exact(composed).value;
    check.rhs = loss.lipschitz() * empirical_rademacher_exact(values).value;
    return check;
}

std::uint64_t binomial(unsigned t, unsigned k) {
    if (k > t) {
        throw InputError("binomial needs k <= T");
    }
    std::uint64_t c = 1;
    for (unsigned i = 1; i <= k; ++i) {
        c = c * (t - k + i) / i;  // exact: c * (t-k+i) is divisible by i at every step
    }
    return c;
}

BinomialCheck binomial_log_bound_check(unsigned t, unsigned k) {
    if (k < 1 || k > t) {
        throw InputError("binomial check needs 1 <= k <= T, got k=" + std::to_string(k) + ", T=" + std::to_string(t));
    }
    if (t > 30) {
        throw InputError("binomial check limited to T <= 30, got T=" + std::to_string(t));
    }
    BinomialCheck check;
    check.log_binom = std::log(static_cast<double>(binomial(t, k)));
    check.bound = static_cast<double>(k) * (1.0 + std::log(static_cast<double>(t) / static_cast<double>(k)));
    check.holds = check.log_binom <= check.bound + 1e-12;
    return check;
}

// ---------------------------------------------------------------------------------------------------------

std::vector<FiniteClassTable> make_verification_corpus(std::uint64_t seed, std::size_t count) {
    std::vector<FiniteClassTable> corpus;
    corpus.reserve(count);
    constexpr int kArities[] = {2, 2, 2, 3, 4};
    for (std::size_t c = 0; c < count; ++c) {
        Engine rng = make_engine(seed, c);
        const auto m = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        const int arity = kArities[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
        const auto n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        std::uniform_int_distribution<int> entry(0, arity - 1);
        std::vector<std::vector<int>> rows(n, std::vector<int>(m));
        for (auto& row : rows) {
            for (int& v : row) {
                v = entry(rng);
            }
        }
        corpus.emplace_back(m, arity, std::move(rows));
    }
    return corpus;
}

std::vector<Label> corpus_labels(std::uint64_t seed, std::size_t index, std::size_t m) {
    Engine rng = make_engine(seed ^ 0x1abe15ULL, index);
    std::bernoulli_distribution coin(0.5);
    std::vector<Label> labels(m);
    for (auto& y : labels) {
        y = coin(rng) ? Label::positive : Label::negative;
    }
    return labels;
}

}  // namespace smoe
