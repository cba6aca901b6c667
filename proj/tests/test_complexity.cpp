// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "smoe/complexity.hpp"
#include "smoe/error.hpp"
#include "support.hpp"

namespace {

using namespace smoe;
using smoe::testing::Rng;
using smoe::testing::table_of;

const FiniteClassTable kAntipodal = table_of(2, 2, {{1, 1}, {0, 0}});

// Natarajan dimension by brute force over every pair of arbitrary labelings of every subset.
std::size_t oracle_natarajan(const FiniteClassTable& t) {
    const std::size_t m = t.points();
    std::size_t best = 0;
    for (std::uint32_t subset = 1; subset < (1u << m); ++subset) {
        std::vector<std::size_t> pts;
        for (std::size_t i = 0; i < m; ++i) {
            if (subset >> i & 1u) {
                pts.push_back(i);
            }
        }
        const std::size_t s = pts.size();
        if (s <= best) {
            continue;
        }
        std::set<std::vector<int>> realized;
        for (const auto& row : t.behaviors()) {
            std::vector<int> r;
            for (std::size_t p : pts) {
                r.push_back(row[p]);
            }
            realized.insert(r);
        }
        std::size_t labelings = 1;
        for (std::size_t i = 0; i < s; ++i) {
            labelings *= static_cast<std::size_t>(t.arity());
        }
        auto decode = [&](std::size_t code) {
            std::vector<int> v(s);
            for (std::size_t i = 0; i < s; ++i) {
                v[i] = static_cast<int>(code % static_cast<std::size_t>(t.arity()));
                code /= static_cast<std::size_t>(t.arity());
            }
            return v;
        };
        bool shattered = false;
        for (std::size_t a = 0; a < labelings && !shattered; ++a) {
            const auto f0 = decode(a);
            for (std::size_t b = 0; b < labelings && !shattered; ++b) {
                const auto f1 = decode(b);
                bool distinct = true;
                for (std::size_t i = 0; i < s; ++i) {
                    distinct = distinct && f0[i] != f1[i];
                }
                if (!distinct) {
                    continue;
                }
                bool all = true;
                for (std::uint32_t choice = 0; choice < (1u << s) && all; ++choice) {
                    std::vector<int> want(s);
                    for (std::size_t i = 0; i < s; ++i) {
                        want[i] = (choice >> i & 1u) ? f1[i] : f0[i];
                    }
                    all = realized.contains(want);
                }
                shattered = all;
            }
        }
        if (shattered) {
            best = s;
        }
    }
    return best;
}

TEST(ClassTable, Validation) {
    EXPECT_THROW(table_of(2, 2, {}), InputError);
    EXPECT_THROW(table_of(2, 2, {{0, 2}}), InputError);
    EXPECT_THROW(table_of(2, 2, {{0}}), InputError);
    EXPECT_THROW(table_of(21, 2, {std::vector<int>(21, 0)}), CapacityError);
    EXPECT_THROW(FiniteClassTable::full(13, 2), CapacityError);
    EXPECT_EQ(FiniteClassTable::full(3, 2).rows(), 8u);
}

TEST(ClassTable, RealOutputs) {
    const Matrix v = table_of(3, 3, {{0, 1, 2}}).real_outputs();
    EXPECT_EQ(v(0, 0), -1.0);
    EXPECT_EQ(v(0, 1), 0.0);
    EXPECT_EQ(v(0, 2), 1.0);
    EXPECT_EQ(table_of(1, 1, {{0}}).real_outputs()(0, 0), 0.0);
}

TEST(ClassTable, CsvRoundTrip) {
    const FiniteClassTable t = table_of(3, 3, {{0, 1, 2}, {2, 2, 0}});
    std::ostringstream out;
    write_class_table_csv(out, t);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "m=3,arity=3");
    std::istringstream in(out.str());
    EXPECT_EQ(read_class_table_csv(in), t);
}

TEST(ClassTable, CsvRejectsCorruption) {
    std::istringstream no_header("0,1\n");
    EXPECT_THROW(read_class_table_csv(no_header), InputError);
    std::istringstream bad_value("m=2,arity=2\n0,5\n");
    EXPECT_THROW(read_class_table_csv(bad_value), InputError);
    std::istringstream short_row("m=2,arity=2\n0\n");
    EXPECT_THROW(read_class_table_csv(short_row), InputError);
    std::istringstream junk("m=2,arity=2\n0,x\n");
    EXPECT_THROW(read_class_table_csv(junk), InputError);
    std::istringstream empty("m=2,arity=2\n");
    EXPECT_THROW(read_class_table_csv(empty), InputError);
}

TEST(RademacherExact, Singleton) {
    const auto r = empirical_rademacher_exact(table_of(5, 2, {{0, 1, 1, 0, 1}}));
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.method, EstimateMethod::exact_enumeration);
    EXPECT_EQ(r.std_error, 0.0);
}

TEST(RademacherExact, Antipodal) { EXPECT_EQ(empirical_rademacher_exact(kAntipodal).value, 0.5); }

TEST(RademacherExact, FullSignClass) {
    for (std::size_t m = 1; m <= 10; ++m) {
        EXPECT_EQ(empirical_rademacher_exact(FiniteClassTable::full(m, 2)).value, 1.0) << m;
    }
}

TEST(RademacherExact, MatchesRecursiveOracle) {
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const Matrix v = smoe::testing::random_matrix(rng, smoe::testing::pick(rng, 1, 6), smoe::testing::pick(rng, 1, 10));
        EXPECT_NEAR(empirical_rademacher_exact(v).value, smoe::testing::oracle_rademacher(v), 1e-13);
    }
}

TEST(RademacherExact, CapacityLimit) {
    EXPECT_THROW(empirical_rademacher_exact(Matrix(1, 21)), CapacityError);
}

TEST(RademacherMc, Singleton) {
    const Matrix v = table_of(10, 2, {{0, 1, 0, 1, 1, 0, 0, 1, 1, 1}}).real_outputs();
    const auto r = empirical_rademacher_mc(class_sup_evaluator(v), 10, 10000, 1);
    EXPECT_EQ(r.method, EstimateMethod::monte_carlo);
    EXPECT_EQ(r.draws, 10000u);
    EXPECT_LE(std::abs(r.value), 3.0 * r.std_error);
}

TEST(RademacherMc, Antipodal) {
    const auto r = empirical_rademacher_mc(class_sup_evaluator(kAntipodal.real_outputs()), 2, 10000, 2);
    EXPECT_LE(std::abs(r.value - 0.5), 3.0 * r.std_error);
}

TEST(RademacherMc, FullSignClass) {
    const auto r = empirical_rademacher_mc(class_sup_evaluator(FiniteClassTable::full(8, 2).real_outputs()), 8, 10000, 3);
    EXPECT_LE(std::abs(r.value - 1.0), 3.0 * r.std_error + 1e-15);
}

TEST(RademacherMc, DeterministicAndCounterBased) {
    const Matrix v = FiniteClassTable::full(4, 3).real_outputs();
    const auto a = empirical_rademacher_mc(class_sup_evaluator(v), 4, 500, 9);
    const auto b = empirical_rademacher_mc(class_sup_evaluator(v), 4, 500, 9);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(rademacher_signs(9, 17, 12), rademacher_signs(9, 17, 12));
    EXPECT_NE(rademacher_signs(9, 17, 64), rademacher_signs(9, 18, 64));
    EXPECT_THROW(empirical_rademacher_mc(class_sup_evaluator(v), 4, 99, 9), InputError);
}

TEST(RademacherMc, AgreesWithExactOnCorpus) {
    const auto corpus = make_verification_corpus(41, 50);
    int inside = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Matrix v = corpus[i].real_outputs();
        const double exact = empirical_rademacher_exact(v).value;
        const auto mc = empirical_rademacher_mc(class_sup_evaluator(v), v.cols(), 10000, 100 + i);
        inside += std::abs(mc.value - exact) <= 3.0 * mc.std_error + 1e-12 ? 1 : 0;
    }
    EXPECT_GE(inside, 47);
}

TEST(Natarajan, Examples) {
    EXPECT_EQ(natarajan_dimension_exact(table_of(3, 2, {{0, 1, 1}})), 0u);
    EXPECT_EQ(natarajan_dimension_exact(FiniteClassTable::full(2, 2)), 2u);
    EXPECT_EQ(natarajan_dimension_exact(FiniteClassTable::full(1, 3)), 1u);
    EXPECT_THROW(natarajan_dimension_exact(FiniteClassTable::full(13, 1)), CapacityError);
}

TEST(Natarajan, MatchesUnrestrictedSearch) {
    Rng rng(32);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t m = smoe::testing::pick(rng, 1, 5);
        const int arity = static_cast<int>(smoe::testing::pick(rng, 2, 3));
        const std::size_t n = smoe::testing::pick(rng, 1, 12);
        std::vector<std::vector<int>> rows(n, std::vector<int>(m));
        for (auto& r : rows) {
            for (int& v : r) {
                v = static_cast<int>(smoe::testing::pick(rng, 0, static_cast<std::size_t>(arity - 1)));
            }
        }
        const FiniteClassTable t(m, arity, rows);
        ASSERT_EQ(natarajan_dimension_exact(t), oracle_natarajan(t)) << "trial " << trial;
    }
}

TEST(Growth, Examples) {
    EXPECT_EQ(growth_function(table_of(3, 2, {{0, 1, 1}, {0, 1, 1}})), 1u);
    EXPECT_EQ(growth_function(FiniteClassTable::full(3, 2)), 8u);
}

TEST(Growth, BoundHoldsOnCorpus) {
    for (const auto& t : make_verification_corpus(5, 50)) {
        const GrowthCheck g = natarajan_growth_check(t);
        const double d = static_cast<double>(g.natarajan_dim);
        const double bound = std::pow(static_cast<double>(t.points()), d) * std::pow(t.arity(), 2.0 * d);
        EXPECT_EQ(g.bound, bound);
        EXPECT_TRUE(g.holds);
        EXPECT_LE(static_cast<double>(g.growth), bound);
    }
}

TEST(Hull, Examples) {
    const HullCheck s = convex_hull_rademacher_check(table_of(3, 2, {{0, 1, 0}}));
    EXPECT_EQ(s.hull_value, 0.0);
    EXPECT_EQ(s.base_value, 0.0);
    const HullCheck a = convex_hull_rademacher_check(kAntipodal);
    EXPECT_EQ(a.hull_value, 0.5);
    EXPECT_EQ(a.base_value, 0.5);
}

TEST(Hull, RandomClassesAgree) {
    Rng rng(33);
    for (int trial = 0; trial < 40; ++trial) {
        const Matrix v = smoe::testing::random_matrix(rng, 4, 4);
        const HullCheck h = convex_hull_rademacher_check(v, 10);
        EXPECT_NEAR(h.hull_value, h.base_value, 1e-12);
        EXPECT_NEAR(h.base_value, smoe::testing::oracle_rademacher(v), 1e-13);
    }
}

TEST(Hull, CapacityLimits) {
    EXPECT_THROW(convex_hull_rademacher_check(Matrix(1, 17)), CapacityError);
    EXPECT_THROW(convex_hull_rademacher_check(Matrix(20, 2), 50), CapacityError);
    EXPECT_THROW(convex_hull_rademacher_check(Matrix(2, 2), 0), InputError);
}

TEST(Contraction, ConstantClass) {
    const std::vector<Label> y{Label::positive, Label::negative, Label::positive};
    const ContractionCheck c = lipschitz_contraction_check(Matrix(1, 3, 0.0), LossFunction::clipped_hinge(), y);
    EXPECT_EQ(c.lhs, 0.0);
    EXPECT_EQ(c.rhs, 0.0);
}

TEST(Contraction, AntipodalClass) {
    const std::vector<Label> y{Label::positive, Label::positive};
    const Matrix v = kAntipodal.real_outputs();
    const ContractionCheck c = lipschitz_contraction_check(v, LossFunction::clipped_hinge(), y);
    EXPECT_LE(c.lhs, c.rhs + 1e-12);
    EXPECT_EQ(c.rhs, 0.5);
    // Composed rows are (0, 0) and (1, 1): the same antipodal geometry shifted, value 0.25.
    EXPECT_EQ(c.lhs, 0.25);
    const ContractionCheck half = lipschitz_contraction_check(0.5 * v, LossFunction::clipped_hinge(), y);
    EXPECT_EQ(half.rhs, 0.25);
    EXPECT_LE(half.lhs, half.rhs + 1e-12);
}

TEST(Contraction, RejectsZeroOne) {
    const std::vector<Label> y{Label::positive};
    EXPECT_THROW(lipschitz_contraction_check(Matrix(1, 1), LossFunction::zero_one(), y), InputError);
    EXPECT_THROW(lipschitz_contraction_check(Matrix(1, 2), LossFunction::clipped_hinge(), y), InputError);
}

TEST(Contraction, HoldsOnCorpusForAllSlopes) {
    const auto corpus = make_verification_corpus(6, 50);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Matrix v = corpus[i].real_outputs();
        const auto y = corpus_labels(6, i, v.cols());
        for (double s : {0.5, 1.0, 2.0}) {
            const ContractionCheck c = lipschitz_contraction_check(v, LossFunction::clipped_hinge(s), y);
            EXPECT_LE(c.lhs, c.rhs + 1e-12) << "class " << i << " slope " << s;
        }
    }
}

TEST(Binomial, Examples) {
    const BinomialCheck same = binomial_log_bound_check(7, 7);
    EXPECT_EQ(same.log_binom, 0.0);
    EXPECT_EQ(same.bound, 7.0);
    const BinomialCheck one = binomial_log_bound_check(9, 1);
    EXPECT_DOUBLE_EQ(one.log_binom, std::log(9.0));
    EXPECT_DOUBLE_EQ(one.bound, 1.0 + std::log(9.0));
    EXPECT_THROW(binomial_log_bound_check(3, 4), InputError);
    EXPECT_THROW(binomial_log_bound_check(31, 1), InputError);
    EXPECT_EQ(binomial(30, 15), 155117520u);
}

TEST(Binomial, FullGrid) {
    int pairs = 0;
    for (unsigned t = 1; t <= 30; ++t) {
        for (unsigned k = 1; k <= t; ++k) {
            EXPECT_TRUE(binomial_log_bound_check(t, k).holds) << t << " " << k;
            ++pairs;
        }
    }
    EXPECT_EQ(pairs, 465);
}

TEST(Corpus, ShapeAndDeterminism) {
    const auto a = make_verification_corpus(3, 50);
    EXPECT_EQ(a, make_verification_corpus(3, 50));
    for (const auto& t : a) {
        EXPECT_GE(t.points(), 1u);
        EXPECT_LE(t.points(), 12u);
        EXPECT_GE(t.rows(), 1u);
        EXPECT_LE(t.rows(), 6u);
    }
}

}  // namespace
