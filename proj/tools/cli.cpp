// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoe/bounds.hpp"
#include "smoe/complexity.hpp"
#include "smoe/error.hpp"
#include "smoe/text_format.hpp"
#include "smoe/trainer.hpp"

namespace smoe::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::size_t kMaxSweepRows = 1000000;
constexpr std::size_t kMaxVerifyClasses = 10000;

template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};

template <class T>
T read_scalar(const json& v, const std::string& name) {
    if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) {
            throw InputError(name + " must be a number");
        }
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) {
            throw InputError(name + " must be a nonnegative integer");
        }
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) {
            throw InputError(name + " must be an integer");
        }
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) {
            throw InputError(name + " must be a string");
        }
    }
    return v.get<T>();
}

template <class T>
void read_field(const json& block, const std::string& key, T& target, const std::string& where) {
    if (!block.contains(key)) {
        return;
    }
    const json& v = block.at(key);
    const std::string name = where + "." + key;
    if constexpr (is_vector<T>::value) {
        if (!v.is_array()) {
            throw InputError(name + " must be an array");
        }
        T values;
        for (const auto& item : v) {
            values.push_back(read_scalar<typename T::value_type>(item, name + "[]"));
        }
        target = std::move(values);
    } else {
        target = read_scalar<T>(v, name);
    }
}

// Flags override config-file values only when given on the command line.
class Overrides {
public:
    template <class T>
    void add(CLI::App* app, const std::string& name, T* target, const std::string& help) {
        auto store = std::make_shared<T>(*target);
        CLI::Option* opt = app->add_option("--" + name, *store, help)->capture_default_str();
        if constexpr (is_vector<T>::value) {
            opt->delimiter(',');
        }
        items_.push_back({opt, [store, target] { *target = *store; }});
    }

    void apply() const {
        for (const auto& [opt, assign] : items_) {
            if (opt->count() > 0) {
                assign();
            }
        }
    }

private:
    std::vector<std::pair<CLI::Option*, std::function<void()>>> items_;
};

// Each command block lists its fields once; flags, config parsing and the manifest echo all derive from it.
template <class Block>
void register_flags(Block& block, CLI::App* app, Overrides& ov) {
    block.visit([&](const char* name, auto& field, const char* help) { ov.add(app, name, &field, help); });
}

template <class Block>
void load_block(Block& block, const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw InputError(where + " block must be an object");
    }
    std::set<std::string> known;
    block.visit([&](const char* name, auto& field, const char*) {
        known.insert(name);
        read_field(j, name, field, where);
    });
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw InputError("unknown field '" + key + "' in " + where + " block");
        }
    }
}

template <class Block>
ordered_json block_json(Block& block) {
    ordered_json j = ordered_json::object();
    block.visit([&](const char* name, auto& field, const char*) { j[name] = field; });
    return j;
}

struct BoundBlock {
    double lipschitz = 1.0;
    double rademacher = 0.0;
    double rademacher_stderr = 0.0;
    double natarajan_dim = 0.0;
    std::size_t m = 1000;
    std::size_t experts = 1;
    std::size_t k = 1;
    double delta = 0.05;
    std::vector<double> spectral;
    std::vector<double> norm21;
    double c = 1.0;
    long long router_outputs = 0;
    long long router_params = 0;
    double natarajan_constant = 1.0;

    template <class V>
    void visit(V&& v) {
        v("lipschitz", lipschitz, "loss Lipschitz constant C");
        v("rademacher", rademacher, "expert-class Rademacher complexity R (ignored when spectral is set)");
        v("rademacher_stderr", rademacher_stderr, "Monte-Carlo standard error of R; > 0 reports an interval");
        v("natarajan_dim", natarajan_dim, "router Natarajan dimension dN (ignored when spectral is set)");
        v("m", m, "training sample count");
        v("experts", experts, "expert count T");
        v("k", k, "experts selected per input");
        v("delta", delta, "confidence parameter in (0, 1)");
        v("spectral", spectral, "network mode: per-layer spectral norm bounds K_i of the experts");
        v("norm21", norm21, "network mode: per-layer (2,1) norm bounds b_i of the experts");
        v("c", c, "network mode: input norm bound");
        v("router_outputs", router_outputs, "network mode: router output count (0 = T)");
        v("router_params", router_params, "network mode: router parameter count");
        v("natarajan_constant", natarajan_constant, "network mode: constant in dN <= const * d * p^2");
    }

    bool network_mode() const { return !spectral.empty() || !norm21.empty(); }
};

struct SweepBlock {
    std::vector<std::size_t> k{1};
    std::vector<std::size_t> experts{1};
    std::vector<std::size_t> m{1000};
    std::vector<double> natarajan_dim{0.0};
    std::vector<double> lipschitz{1.0};
    std::vector<double> rademacher{0.0};
    std::vector<double> delta{0.05};

    template <class V>
    void visit(V&& v) {
        v("k", k, "values of k");
        v("experts", experts, "values of T");
        v("m", m, "values of m");
        v("natarajan_dim", natarajan_dim, "values of dN");
        v("lipschitz", lipschitz, "values of C");
        v("rademacher", rademacher, "values of R");
        v("delta", delta, "values of delta");
    }
};

struct VerifyBlock {
    std::size_t classes = 50;
    std::vector<std::string> corpus_files;
    std::size_t grid_resolution = 10;
    std::vector<double> contraction_slopes{1.0, 0.5, 2.0};
    unsigned binomial_max_t = 30;

    template <class V>
    void visit(V&& v) {
        v("classes", classes, "size of the seeded corpus (ignored when corpus_files is set)");
        v("corpus_files", corpus_files, "class-table CSV files to verify instead of the seeded corpus");
        v("grid_resolution", grid_resolution, "simplex grid divisions for the convex-hull check");
        v("contraction_slopes", contraction_slopes, "clipped-hinge slopes (Lipschitz constants) for contraction");
        v("binomial_max_t", binomial_max_t, "largest T for the binomial estimate check (<= 30)");
    }
};

struct GapBlock {
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double learning_rate = 0.1;
    double weight_init_scale = 1.0;
    double loss_slope = 1.0;
    std::size_t dim = 2;
    std::size_t clusters_per_class = 2;
    double norm_bound = 1.0;
    double center_spread = 3.0;
    std::size_t train_size = 512;
    std::size_t test_size = 5120;
    std::size_t experts = 8;
    std::vector<std::size_t> expert_hidden{8};
    std::vector<std::size_t> router_hidden{64};
    std::vector<std::size_t> k_values{1, 2, 4, 8};
    double delta = 0.05;
    double natarajan_constant = 1.0;

    template <class V>
    void visit(V&& v) {
        v("epochs", epochs, "training epochs per k");
        v("batch_size", batch_size, "minibatch size");
        v("learning_rate", learning_rate, "gradient-descent step size");
        v("weight_init_scale", weight_init_scale, "init entries uniform in +/- scale/sqrt(fan_in)");
        v("loss_slope", loss_slope, "slope of the clipped-hinge training loss");
        v("dim", dim, "input dimension");
        v("clusters_per_class", clusters_per_class, "Gaussian clusters per class");
        v("norm_bound", norm_bound, "input norm bound c");
        v("center_spread", center_spread, "standard deviation of the cluster centers");
        v("train_size", train_size, "training sample count m");
        v("test_size", test_size, "held-out sample count");
        v("experts", experts, "expert count T");
        v("expert_hidden", expert_hidden, "expert hidden-layer widths");
        v("router_hidden", router_hidden, "router hidden-layer widths");
        v("k_values", k_values, "values of k, one trained model each");
        v("delta", delta, "confidence parameter in (0, 1)");
        v("natarajan_constant", natarajan_constant, "constant in dN <= const * d * p^2");
    }

    GapExperimentConfig to_config(std::uint64_t seed) const {
        GapExperimentConfig cfg;
        cfg.train.epochs = epochs;
        cfg.train.batch_size = batch_size;
        cfg.train.learning_rate = learning_rate;
        cfg.train.weight_init_scale = weight_init_scale;
        cfg.train.loss = LossFunction::clipped_hinge(loss_slope);
        cfg.data.dim = dim;
        cfg.data.clusters_per_class = clusters_per_class;
        cfg.data.norm_bound = norm_bound;
        cfg.data.center_spread = center_spread;
        cfg.data.train_size = train_size;
        cfg.data.test_size = test_size;
        cfg.shape.input_dim = dim;
        cfg.shape.experts = experts;
        cfg.shape.expert_hidden = expert_hidden;
        cfg.shape.router_hidden = router_hidden;
        cfg.k_values = k_values;
        cfg.delta = delta;
        cfg.natarajan_constant = natarajan_constant;
        cfg.seed = seed;
        return cfg;
    }
};

struct Common {
    std::string config_path;
    std::string out_dir = "smoegen-out";
    std::uint64_t seed = 0;
    CLI::Option* out_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;
    ordered_json manifest_extra = ordered_json::object();
    int status = kExitOk;
};

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json breakdown_json(const BoundBreakdown& b) {
    return {{"rademacher_term", b.rademacher_term},
            {"sparsity_term", b.sparsity_term},
            {"sample_term", b.sample_term},
            {"confidence_term", b.confidence_term},
            {"total", b.total},
            {"rademacher_band", b.rademacher_band},
            {"total_lower", b.total_lower},
            {"total_upper", b.total_upper}};
}

BoundInputs resolve_bound_inputs(const BoundBlock& b) {
    BoundInputs in;
    in.lipschitz = b.lipschitz;
    in.m = b.m;
    in.experts = b.experts;
    in.k = b.k;
    in.delta = b.delta;
    if (b.network_mode()) {
        in.rademacher = bartlett_bound(NormBudget(b.spectral, b.norm21, b.c), b.m);
        const long long outputs = b.router_outputs == 0 ? static_cast<long long>(b.experts) : b.router_outputs;
        in.natarajan_dim = natarajan_nn_bound(outputs, b.router_params, b.natarajan_constant);
    } else {
        in.rademacher = b.rademacher_stderr > 0.0
                            ? ComplexityEstimate{b.rademacher, EstimateMethod::monte_carlo, b.rademacher_stderr, 0}
                            : ComplexityEstimate::closed_form(b.rademacher);
        in.natarajan_dim = b.natarajan_dim;
    }
    in.validate();
    return in;
}

Outputs run_bound(const BoundBlock& block, std::ostream& out) {
    const BoundInputs in = resolve_bound_inputs(block);
    const BoundBreakdown b = theorem1_bound(in);

    ordered_json report = {
        {"scope", kBoundScopeNote},
        {"mode", block.network_mode() ? "network" : "theorem"},
        {"inputs",
         {{"C", in.lipschitz},
          {"R", in.rademacher.value},
          {"R_method", to_string(in.rademacher.method)},
          {"R_stderr", in.rademacher.std_error},
          {"dN", in.natarajan_dim},
          {"m", in.m},
          {"T", in.experts},
          {"k", in.k},
          {"delta", in.delta}}},
        {"breakdown", breakdown_json(b)},
        {"vacuous", b.total > 1.0},
    };
    Outputs o;
    o.files.emplace_back("bound.json", dump(report));
    o.files.emplace_back("bound.csv", bound_csv_header() + "\n" + bound_csv_row(in, b) + "\n");
    out << "bound total " << format_real(b.total) << (b.total > 1.0 ? " (vacuous)" : "") << "\n";
    return o;
}

SweepGrid to_grid(const SweepBlock& b) {
    SweepGrid g;
    g.k = b.k;
    g.experts = b.experts;
    g.m = b.m;
    g.natarajan_dim = b.natarajan_dim;
    g.lipschitz = b.lipschitz;
    g.rademacher = b.rademacher;
    g.delta = b.delta;
    return g;
}

void validate_sweep(const SweepBlock& b) {
    const SweepGrid g = to_grid(b);
    if (g.size() == 0) {
        throw InputError("every sweep axis needs at least one value");
    }
    double size = 1.0;
    for (std::size_t n : {g.k.size(), g.experts.size(), g.m.size(), g.natarajan_dim.size(), g.lipschitz.size(),
                          g.rademacher.size(), g.delta.size()}) {
        size *= static_cast<double>(n);
    }
    if (size > static_cast<double>(kMaxSweepRows)) {
        throw CapacityError("sweep grid exceeds " + std::to_string(kMaxSweepRows) + " rows");
    }
}

Outputs run_sweep(const SweepBlock& block, std::ostream& out) {
    const auto rows = sweep(to_grid(block));
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    Outputs o;
    o.files.emplace_back("sweep.csv", csv.str());
    ordered_json invalid = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].result) {
            invalid.push_back({{"row", i}, {"error", rows[i].error}});
        }
    }
    out << "sweep rows " << rows.size() << ", invalid " << invalid.size() << "\n";
    o.manifest_extra["invalid_rows"] = std::move(invalid);
    return o;
}

std::vector<FiniteClassTable> load_corpus(const VerifyBlock& b, std::uint64_t seed) {
    if (b.corpus_files.empty()) {
        if (b.classes < 1 || b.classes > kMaxVerifyClasses) {
            throw InputError("verify.classes must lie in [1, " + std::to_string(kMaxVerifyClasses) + "]");
        }
        return make_verification_corpus(seed, b.classes);
    }
    std::vector<FiniteClassTable> corpus;
    for (const auto& path : b.corpus_files) {
        std::ifstream in(path);
        if (!in) {
            throw InputError("cannot read corpus file " + path);
        }
        try {
            corpus.push_back(read_class_table_csv(in));
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }
    return corpus;
}

void validate_verify(const VerifyBlock& b) {
    if (b.grid_resolution < 1) {
        throw InputError("verify.grid_resolution must be at least 1");
    }
    if (b.binomial_max_t < 1 || b.binomial_max_t > 30) {
        throw InputError("verify.binomial_max_t must lie in [1, 30]");
    }
    for (double s : b.contraction_slopes) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw InputError("verify.contraction_slopes must be positive and finite");
        }
    }
}

Outputs run_verify(const VerifyBlock& block, const std::vector<FiniteClassTable>& corpus, std::uint64_t seed,
                   std::ostream& out) {
    constexpr double kTol = 1e-12;
    std::ostringstream csv;
    csv << "case,check,lhs,rhs,status\n";
    std::size_t checks = 0;
    std::size_t failures = 0;
    auto line = [&](const std::string& id, const std::string& check, double lhs, double rhs, bool pass) {
        csv << id << ',' << check << ',' << format_real(lhs) << ',' << format_real(rhs) << ','
            << (pass ? "PASS" : "FAIL") << '\n';
        ++checks;
        failures += pass ? 0 : 1;
    };

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const FiniteClassTable& table = corpus[i];
        const std::string id = "class " + std::to_string(i);

        const GrowthCheck g = natarajan_growth_check(table);
        line(id, "growth", static_cast<double>(g.growth), g.bound, g.holds);

        const Matrix values = table.real_outputs();
        const std::vector<Label> labels = corpus_labels(seed, i, table.points());
        for (double slope : block.contraction_slopes) {
            const ContractionCheck c = lipschitz_contraction_check(values, LossFunction::clipped_hinge(slope), labels);
            line(id, "contraction_C" + format_real(slope), c.lhs, c.rhs, c.lhs <= c.rhs + kTol);
        }

        const HullCheck h = convex_hull_rademacher_check(values, block.grid_resolution);
        line(id, "hull", h.hull_value, h.base_value, std::abs(h.hull_value - h.base_value) <= kTol);
    }
    for (unsigned t = 1; t <= block.binomial_max_t; ++t) {
        for (unsigned k = 1; k <= t; ++k) {
            const BinomialCheck b = binomial_log_bound_check(t, k);
            line("T=" + std::to_string(t) + " k=" + std::to_string(k), "binomial", b.log_binom, b.bound, b.holds);
        }
    }

    Outputs o;
    o.files.emplace_back("verify.csv", csv.str());
    o.manifest_extra["classes"] = corpus.size();
    o.manifest_extra["checks"] = checks;
    o.manifest_extra["failures"] = failures;
    o.status = failures == 0 ? kExitOk : kExitRuntime;
    out << "verify checks " << checks << ", failures " << failures << "\n";
    return o;
}

Outputs run_gap(const GapExperimentConfig& cfg, std::ostream& out) {
    const auto rows = gap_experiment(cfg);
    std::ostringstream csv;
    write_gap_csv(csv, rows);
    Outputs o;
    o.files.emplace_back("gap_report.json", gap_report_json(rows).dump(2) + "\n");
    o.files.emplace_back("gap_report.csv", csv.str());

    bool increasing = true;
    ordered_json vacuous = ordered_json::array();
    ordered_json violations = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && !(rows[i].bound.total > rows[i - 1].bound.total)) {
            increasing = false;
        }
        if (rows[i].vacuous) {
            vacuous.push_back(rows[i].k);
        }
        if (!rows[i].bound_dominates_gap) {
            violations.push_back(rows[i].k);
        }
        out << "k=" << rows[i].k << " gap " << format_real(rows[i].gap.gap) << " bound "
            << format_real(rows[i].bound.total) << (rows[i].vacuous ? " (vacuous)" : "")
            << (rows[i].bound_dominates_gap ? "" : " (gap exceeds bound)") << "\n";
    }
    o.manifest_extra["norm_budget"] = "data-dependent instantiation from trained expert weights";
    o.manifest_extra["bound_increasing_in_k"] = increasing;
    o.manifest_extra["vacuous_k"] = std::move(vacuous);
    o.manifest_extra["dominance_violations_k"] = std::move(violations);
    return o;
}

json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read config file " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("config " + path + " is not valid JSON: " + e.what());
    }
}

// Returns the command block, applying the top-level seed and output_dir to `common`.
json select_block(const json& cfg, const std::string& command, Common& common) {
    if (!cfg.is_object()) {
        throw InputError("config must be a JSON object");
    }
    static const std::set<std::string> kBlocks{"bound", "sweep", "verify", "gap"};
    static const std::set<std::string> kTop{"command", "seed", "output_dir"};
    std::vector<std::string> present;
    for (const auto& [key, value] : cfg.items()) {
        if (kBlocks.contains(key)) {
            present.push_back(key);
        } else if (!kTop.contains(key)) {
            throw InputError("unknown top-level field '" + key + "'");
        }
    }
    if (present.size() != 1) {
        throw InputError("config must contain exactly one command block, found " + std::to_string(present.size()));
    }
    if (present.front() != command) {
        throw InputError("config holds a '" + present.front() + "' block but the command is '" + command + "'");
    }
    std::string declared = command;
    read_field(cfg, "command", declared, "config");
    if (declared != command) {
        throw InputError("config.command is '" + declared + "' but the command is '" + command + "'");
    }
    read_field(cfg, "seed", common.seed, "config");
    read_field(cfg, "output_dir", common.out_dir, "config");
    return cfg.at(command);
}

void prepare_output_dir(const std::string& dir) {
    if (dir.empty()) {
        throw InputError("output directory must not be empty");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw InputError("cannot create output directory " + dir);
    }
}

void write_outputs(const std::string& dir, const std::vector<std::pair<std::string, std::string>>& files) {
    for (const auto& [name, content] : files) {
        const auto path = std::filesystem::path(dir) / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << content;
        if (!f) {
            throw Error("failed writing " + path.string());
        }
    }
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "JSON config file with one command block");
    c.out_opt = sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    c.seed_opt = sub->add_option("--seed", c.seed, "seed")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalization-bound toolkit for sparse mixture-of-experts models", "smoegen"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    BoundBlock bound;
    SweepBlock sweep_block;
    VerifyBlock verify;
    GapBlock gap;
    Overrides ov_bound;
    Overrides ov_sweep;
    Overrides ov_verify;
    Overrides ov_gap;
    Common c_bound;
    Common c_sweep;
    Common c_verify;
    Common c_gap;

    CLI::App* s_bound = app.add_subcommand("bound", "evaluate the bound for one parameter set");
    CLI::App* s_sweep = app.add_subcommand("sweep", "evaluate the bound over a parameter grid");
    CLI::App* s_verify = app.add_subcommand("verify", "run the lemma checks over a corpus of finite classes");
    CLI::App* s_gap = app.add_subcommand("gap", "train one model per k and compare measured gaps with the bound");
    add_common(s_bound, c_bound);
    add_common(s_sweep, c_sweep);
    add_common(s_verify, c_verify);
    add_common(s_gap, c_gap);
    register_flags(bound, s_bound, ov_bound);
    register_flags(sweep_block, s_sweep, ov_sweep);
    register_flags(verify, s_verify, ov_verify);
    register_flags(gap, s_gap, ov_gap);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    auto execute = [&](const std::string& command, Common& common, auto& block, const Overrides& ov,
                       auto&& prepare) -> int {
        const std::uint64_t flag_seed = common.seed;
        const std::string flag_out = common.out_dir;
        if (!common.config_path.empty()) {
            const json cfg = read_config(common.config_path);
            const json j = select_block(cfg, command, common);
            load_block(block, j, command);
        }
        if (common.seed_opt->count() > 0) {
            common.seed = flag_seed;
        }
        if (common.out_opt->count() > 0) {
            common.out_dir = flag_out;
        }
        ov.apply();

        auto run_command = prepare(block, common.seed);
        prepare_output_dir(common.out_dir);
        Outputs o = run_command();

        ordered_json manifest = {{"artifact", "smoegen"},
                                 {"version", kVersion},
                                 {"command", command},
                                 {"seed", common.seed},
                                 {"config", block_json(block)}};
        if (command != "verify") {
            manifest["scope"] = kBoundScopeNote;
        }
        ordered_json names = ordered_json::array();
        for (const auto& f : o.files) {
            names.push_back(f.first);
        }
        manifest["outputs"] = std::move(names);
        for (auto& [key, value] : o.manifest_extra.items()) {
            manifest[key] = value;
        }
        o.files.emplace_back("manifest.json", dump(manifest));
        write_outputs(common.out_dir, o.files);
        return o.status;
    };

    try {
        if (s_bound->parsed()) {
            return execute("bound", c_bound, bound, ov_bound, [&](const BoundBlock& b, std::uint64_t) {
                resolve_bound_inputs(b);
                return std::function<Outputs()>([&b, &out] { return run_bound(b, out); });
            });
        }
        if (s_sweep->parsed()) {
            return execute("sweep", c_sweep, sweep_block, ov_sweep, [&](const SweepBlock& b, std::uint64_t) {
                validate_sweep(b);
                return std::function<Outputs()>([&b, &out] { return run_sweep(b, out); });
            });
        }
        if (s_verify->parsed()) {
            return execute("verify", c_verify, verify, ov_verify, [&](const VerifyBlock& b, std::uint64_t seed) {
                validate_verify(b);
                auto corpus = std::make_shared<std::vector<FiniteClassTable>>(load_corpus(b, seed));
                return std::function<Outputs()>(
                    [&b, &out, corpus, seed] { return run_verify(b, *corpus, seed, out); });
            });
        }
        return execute("gap", c_gap, gap, ov_gap, [&](const GapBlock& b, std::uint64_t seed) {
            auto cfg = std::make_shared<GapExperimentConfig>(b.to_config(seed));
            cfg->validate();
            return std::function<Outputs()>([cfg, &out] { return run_gap(*cfg, out); });
        });
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace smoe::cli
