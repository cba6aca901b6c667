// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate. One line per criterion: PASS/FAIL, the measured quantity, and wall time against its limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli.hpp"
#include "smoe/bounds.hpp"
#include "smoe/complexity.hpp"
#include "smoe/error.hpp"
#include "smoe/trainer.hpp"
#include "support.hpp"

namespace {

using namespace smoe;
using smoe::testing::Rng;
namespace fs = std::filesystem;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < limit_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] AC%02d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s,
                limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const std::vector<FiniteClassTable>& corpus() {
    static const auto c = make_verification_corpus(0, 50);
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"smoegen"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    return smoe::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace

int main() {
    criterion(1, "gate contract", 10.0, [] {
        Rng rng(1001);
        double worst = 0.0;
        int bad = 0;
        for (int i = 0; i < 10000; ++i) {
            const std::size_t t = smoe::testing::pick(rng, 1, 16);
            const std::size_t k = smoe::testing::pick(rng, 1, t);
            const SMoEModel model = smoe::testing::random_model(rng, 3, t, k, 1, 4);
            const ForwardResult r = smoe_forward(model, smoe::testing::random_vector(rng, 3));
            std::size_t nonzero = 0;
            double sum = 0.0;
            for (std::size_t j = 0; j < t; ++j) {
                const bool sel = std::binary_search(r.gate.selected.begin(), r.gate.selected.end(), j);
                nonzero += r.gate.weights[j] != 0.0 ? 1 : 0;
                bad += (r.gate.weights[j] > 0.0) != sel ? 1 : 0;
                sum += r.gate.weights[j];
            }
            bad += nonzero != k ? 1 : 0;
            bad += sparse_pattern(r.gate).ones() != k ? 1 : 0;
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        return Outcome{bad == 0 && worst <= 1e-9, "10000 gates, violations " + std::to_string(bad) + ", max |sum-1| " +
                                                      fmt("%.3g", worst)};
    });

    criterion(2, "dense-oracle equivalence", 5.0, [] {
        Rng rng(1002);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const std::size_t t = smoe::testing::pick(rng, 1, 8);
            const std::size_t k = smoe::testing::pick(rng, 1, t);
            const SMoEModel model = smoe::testing::random_model(rng, 4, t, k);
            const auto x = smoe::testing::random_vector(rng, 4);
            worst = std::max(worst, std::abs(smoe_forward(model, x).prediction - smoe::testing::oracle_mixture(model, x)));
        }
        return Outcome{worst <= 1e-9, "1000 cases, max error " + fmt("%.3g", worst)};
    });

    criterion(3, "Rademacher Monte-Carlo vs exact", 60.0, [] {
        const auto classes = make_verification_corpus(303, 50);
        int inside = 0;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            const Matrix v = classes[i].real_outputs();
            const double exact = empirical_rademacher_exact(v).value;
            const auto mc = empirical_rademacher_mc(class_sup_evaluator(v), v.cols(), 10000, 7000 + i);
            inside += std::abs(mc.value - exact) <= 3.0 * mc.std_error + 1e-12 ? 1 : 0;
        }
        return Outcome{inside >= 47, std::to_string(inside) + "/50 within 3 stderr (need 47)"};
    });

    criterion(4, "convex hull equality", 30.0, [] {
        double worst = 0.0;
        for (const auto& t : corpus()) {
            const HullCheck h = convex_hull_rademacher_check(t, 10);
            worst = std::max(worst, std::abs(h.hull_value - h.base_value));
        }
        return Outcome{worst <= 1e-12, "50 classes, max |hull-base| " + fmt("%.3g", worst)};
    });

    criterion(5, "Lipschitz contraction", 30.0, [] {
        double worst = -INFINITY;
        for (std::size_t i = 0; i < corpus().size(); ++i) {
            const Matrix v = corpus()[i].real_outputs();
            const auto y = corpus_labels(0, i, v.cols());
            for (double s : {1.0, 0.5, 2.0}) {
                const ContractionCheck c = lipschitz_contraction_check(v, LossFunction::clipped_hinge(s), y);
                worst = std::max(worst, c.lhs - c.rhs);
            }
        }
        return Outcome{worst <= 1e-12, "50 classes x C in {1, 0.5, 2}, max lhs-rhs " + fmt("%.3g", worst)};
    });

    criterion(6, "Natarajan growth bound", 120.0, [] {
        int bad = 0;
        for (const auto& t : corpus()) {
            const GrowthCheck g = natarajan_growth_check(t);
            const double d = static_cast<double>(g.natarajan_dim);
            const double bound = std::pow(static_cast<double>(t.points()), d) * std::pow(t.arity(), 2.0 * d);
            bad += static_cast<double>(g.growth) <= bound ? 0 : 1;
        }
        return Outcome{bad == 0, "50 classes, violations " + std::to_string(bad)};
    });

    criterion(7, "binomial estimate", 1.0, [] {
        int pairs = 0;
        int bad = 0;
        for (unsigned t = 1; t <= 30; ++t) {
            for (unsigned k = 1; k <= t; ++k) {
                const BinomialCheck b = binomial_log_bound_check(t, k);
                bad += b.log_binom <= b.bound + 1e-12 ? 0 : 1;
                ++pairs;
            }
        }
        return Outcome{bad == 0 && pairs == 465, std::to_string(pairs) + " pairs, violations " + std::to_string(bad)};
    });

    criterion(8, "sparsity monotonicity", 5.0, [] {
        int bad = 0;
        for (std::size_t t = 1; t <= 64; ++t) {
            double prev_k = -1.0;
            for (std::size_t k = 1; k <= t; ++k) {
                double prev_m = INFINITY;
                for (std::size_t m : {100, 1000, 10000, 100000}) {
                    BoundInputs in;
                    in.lipschitz = 1.0;
                    in.rademacher = ComplexityEstimate::closed_form(0.05);
                    in.natarajan_dim = 4.0;
                    in.m = m;
                    in.experts = t;
                    in.k = k;
                    in.delta = 0.05;
                    const double total = theorem1_bound(in).total;
                    bad += total <= prev_m ? 0 : 1;
                    prev_m = total;
                    if (m == 1000) {
                        bad += total > prev_k ? 0 : 1;
                        prev_k = total;
                    }
                }
            }
        }
        return Outcome{bad == 0, "T <= 64, all k and m, violations " + std::to_string(bad)};
    });

    criterion(9, "norm oracles", 10.0, [] {
        Rng rng(1009);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Matrix a = smoe::testing::random_matrix(rng, smoe::testing::pick(rng, 1, 8), smoe::testing::pick(rng, 1, 8));
            const double want = smoe::testing::jacobi_singular_values(a).front();
            worst = std::max(worst, std::abs(spectral_norm(a) - want) / want);
        }
        const double r1 = bartlett_bound(NormBudget({2.0}, {3.0}, 1.0), 100).value;
        return Outcome{worst <= 1e-6 && r1 == 0.3,
                       "max relative spectral error " + fmt("%.3g", worst) + ", Bartlett r=1 " + fmt("%.17g", r1)};
    });

    criterion(10, "gradient check", 30.0, [] {
        Rng rng(1010);
        double worst = 0.0;
        int checked = 0;
        int skipped = 0;
        while (checked < 20) {
            const std::size_t d = smoe::testing::pick(rng, 1, 4);
            const std::size_t t = smoe::testing::pick(rng, 1, 4);
            ModelShape s;
            s.input_dim = d;
            s.experts = t;
            s.k = smoe::testing::pick(rng, 1, std::min<std::size_t>(2, t));
            s.expert_hidden = smoe::testing::random_widths(rng, 2, 8);
            s.router_hidden = smoe::testing::random_widths(rng, 2, 8);
            const SMoEModel m = init_model(s, rng(), 2.0);
            const BatchSampler sample = [d](Engine& e) {
                Rng local(e());
                return smoe::testing::random_dataset(local, 4, d);
            };
            const std::uint64_t seed = rng();
            try {
                worst = std::max(worst, finite_diff_gradcheck(m, sample, seed));
                ++checked;
            } catch (const CheckError&) {
                ++skipped;
            }
        }
        const SMoEModel linear({DenseNet({Matrix{{0.3, -0.2}}})}, DenseNet({Matrix{{0.1, 0.4}}}), 1);
        const Dataset batch({{{0.5, 0.1}, Label::positive}, {{-0.2, 0.6}, Label::negative}}, 1.0);
        const double lin = finite_diff_gradcheck(linear, batch);
        return Outcome{worst <= 1e-4 && lin <= 1e-8,
                       "20 kink-free configurations max " + fmt("%.3g", worst) + " (" + std::to_string(skipped) +
                           " drawn configurations had no kink-free batch), linear " + fmt("%.3g", lin)};
    });

    criterion(11, "end-to-end gap experiment", 300.0, [] {
        GapExperimentConfig cfg;
        cfg.shape.input_dim = 2;
        cfg.shape.experts = 8;
        cfg.shape.expert_hidden = {8};
        cfg.shape.router_hidden = {64};
        cfg.k_values = {1, 2, 4, 8};
        cfg.data.train_size = 512;
        cfg.data.test_size = 5120;
        cfg.seed = 0;
        const auto rows = gap_experiment(cfg);
        const bool same = gap_report_json(rows).dump() == gap_report_json(gap_experiment(cfg)).dump();
        bool increasing = true;
        bool gap_ok = true;
        std::string flagged;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            increasing = increasing && (i == 0 || rows[i].bound.total > rows[i - 1].bound.total);
            gap_ok = gap_ok && rows[i].gap.gap >= 0.0 && rows[i].gap.gap <= 1.0;
            if (!rows[i].bound_dominates_gap) {
                flagged += " k=" + std::to_string(rows[i].k);
            }
        }
        std::string detail = std::string("deterministic ") + (same ? "yes" : "no") + ", bound increasing " +
                             (increasing ? "yes" : "no") + ", gaps in [0,1] " + (gap_ok ? "yes" : "no") +
                             ", bounds";
        for (const auto& r : rows) {
            detail += " " + fmt("%.4g", r.bound.total);
        }
        detail += ", dominance violations:" + (flagged.empty() ? std::string(" none") : flagged);
        return Outcome{same && increasing && gap_ok, detail};
    });

    criterion(12, "CLI determinism and golden", 10.0, [] {
        const fs::path root = fs::temp_directory_path() / "smoegen_acceptance";
        fs::remove_all(root);
        const std::string src = SMOE_SOURCE_DIR;
        const std::vector<std::vector<std::string>> commands{
            {"bound", "--config", src + "/configs/bound_golden.json"},
            {"sweep", "--config", src + "/configs/sweep_k_m.json"},
            {"verify", "--config", src + "/configs/verify_corpus.json"},
            {"gap", "--config", src + "/configs/gap_t8.json"},
        };
        int mismatched = 0;
        for (const auto& base : commands) {
            std::map<std::string, std::string> seen[2];
            for (int rep = 0; rep < 2; ++rep) {
                const fs::path out = root / (base[0] + std::to_string(rep));
                auto args = base;
                args.insert(args.end(), {"--out", out.string()});
                if (run_cli(args) != 0) {
                    return Outcome{false, base[0] + " exited nonzero"};
                }
                for (const auto& e : fs::directory_iterator(out)) {
                    seen[rep][e.path().filename().string()] = slurp(e.path());
                }
            }
            mismatched += seen[0] == seen[1] ? 0 : 1;
        }
        const bool golden = slurp(root / "bound0" / "bound.csv") == slurp(src + "/tests/golden/bound.csv");
        fs::remove_all(root);
        return Outcome{mismatched == 0 && golden, "4 subcommands, non-reproducible " + std::to_string(mismatched) +
                                                      ", golden bound.csv " + (golden ? "identical" : "differs")};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
