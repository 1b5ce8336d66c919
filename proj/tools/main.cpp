#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "augmentor/benchmark.hpp"
#include "augmentor/complexity.hpp"
#include "augmentor/decision.hpp"
#include "augmentor/diversity.hpp"
#include "augmentor/error.hpp"
#include "augmentor/geometric_series.hpp"
#include "augmentor/manifest.hpp"
#include "augmentor/nested_cv.hpp"
#include "augmentor/permutation_test.hpp"
#include "augmentor/report.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/simulate.hpp"
#include "augmentor/sweep.hpp"
#include "augmentor/synthesizer.hpp"
#include "augmentor/tabular_io.hpp"

namespace {

using namespace augmentor;

class PhaseTimer {
public:
    PhaseTimer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string join_argv(int argc, char** argv) {
    std::string line;
    for (int i = 0; i < argc; ++i) {
        if (i) line += ' ';
        line += argv[i];
    }
    return line;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed: " + path.string());
}

// stdout when no path is given
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    write_text_file(out_path, text);
}

Dataset load_dataset(const std::string& data_path, const std::string& schema_path) {
    Schema schema = load_schema(schema_path);
    LoadReport report = load_csv(data_path, schema);
    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
    if (report.dropped_missing_outcome > 0)
        std::cerr << "warning: dropped " << report.dropped_missing_outcome
                  << " rows with a missing outcome\n";
    return std::move(report.data);
}

void refuse_overwriting_inputs(const std::string& out,
                               std::initializer_list<std::string> inputs) {
    if (out.empty()) return;
    std::error_code ec;
    for (const std::string& in : inputs) {
        if (in.empty()) continue;
        if (out == in || std::filesystem::equivalent(out, in, ec))
            throw UsageError("refusing to overwrite input file '" + in + "'");
    }
}

using Settings = std::map<std::string, std::string>;

void put(Settings& s, const std::string& key, const std::string& value) { s[key] = value; }
void put(Settings& s, const std::string& key, bool value) { s[key] = value ? "true" : "false"; }
void put(Settings& s, const std::string& key, double value) { s[key] = format_double(value); }
template <typename T>
void put(Settings& s, const std::string& key, T value) {
    s[key] = std::to_string(value);
}

// every command ends by dropping a manifest next to its outputs
struct ManifestSink {
    RunManifest manifest;
    std::string path;

    void add_input(const std::string& label, const std::string& file) {
        if (!file.empty()) manifest.inputs[label + ":" + file] = file_digest_hex(file);
    }
    void note_config(const CLI::App* sub) {
        for (const CLI::App* node = sub; node != nullptr; node = node->get_parent()) {
            const CLI::Option* opt = node->get_config_ptr();
            if (!opt || opt->count() == 0) continue;
            std::string file = opt->as<std::string>();
            if (file.empty()) continue;
            add_input("config", file);
            manifest.settings["config"] = file;
            return;
        }
    }
    void finish(const PhaseTimer& total) {
        manifest.timings_ms["total"] = total.ms();
        if (!path.empty()) write_manifest(manifest, path);
    }
};

SynthesizerSpec make_spec(const std::string& model, std::uint64_t seed,
                          const std::string& external_cmd, const std::string& external_workdir,
                          bool external_strict) {
    SynthesizerSpec spec;
    spec.kind = synth_kind_from_string(model);
    spec.seed = seed;
    switch (spec.kind) {
        case SynthKind::seq: spec.config = SeqConfig{}; break;
        case SynthKind::bn: spec.config = BnConfig{}; break;
        case SynthKind::bootstrap: spec.config = BootstrapConfig{}; break;
        case SynthKind::external: {
            if (external_cmd.empty())
                throw UsageError("synthesizer 'external' needs --external-cmd");
            ExternalConfig cfg;
            cfg.command = external_cmd;
            cfg.workdir = external_workdir.empty()
                              ? (std::filesystem::temp_directory_path() / "augmentor_external")
                                    .string()
                              : external_workdir;
            cfg.strict = external_strict;
            spec.config = cfg;
            break;
        }
    }
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------- profile

struct ProfileCmd {
    const CLI::App* cli = nullptr;
    std::string data, schema, out, manifest_path;
    int threads = 1;
    double baseline_auc = 0.0;
    CLI::Option* baseline_opt = nullptr;

    void run(const std::string& cmdline) {
        PhaseTimer total;
        Dataset ds = load_dataset(data, schema);
        std::optional<double> base;
        if (baseline_opt->count() > 0) base = baseline_auc;
        ComplexityProfile p = profile(ds, base, threads);

        nlohmann::json doc;
        doc["rows"] = p.n0;
        doc["imbalance"] = p.imbalance;
        doc["dof"] = p.dof;
        doc["std_entropy"] = p.std_entropy;
        doc["mi_cov"] = p.mi_cov;
        doc["separability"] = p.separability;
        if (p.baseline_auc) doc["baseline_auc"] = *p.baseline_auc;
        emit(doc.dump(2) + "\n", out);

        ManifestSink sink;
        sink.path = !manifest_path.empty() ? manifest_path
                    : !out.empty()         ? out + ".manifest.json"
                                           : "";
        sink.manifest.command_line = cmdline;
        sink.note_config(cli);
        sink.add_input("data", data);
        sink.add_input("schema", schema);
        put(sink.manifest.settings, "data", data);
        put(sink.manifest.settings, "schema", schema);
        put(sink.manifest.settings, "threads", threads);
        if (base) put(sink.manifest.settings, "baseline_auc", *base);
        put(sink.manifest.settings, "out", out);
        sink.finish(total);
    }
};

void add_profile(CLI::App& app, const std::string& cmdline) {
    auto cmd = std::make_shared<ProfileCmd>();
    CLI::App* sub = app.add_subcommand("profile", "Summarize dataset complexity");
    sub->add_option("--data", cmd->data, "input CSV")->required();
    sub->add_option("--schema", cmd->schema, "schema JSON")->required();
    cmd->baseline_opt =
        sub->add_option("--baseline-auc", cmd->baseline_auc, "echo a known baseline AUC");
    sub->add_option("--threads", cmd->threads, "worker threads")
        ->envname("AUGMENTOR_THREADS")
        ->default_val(1);
    sub->add_option("--out", cmd->out, "write the JSON here instead of stdout");
    sub->add_option("--manifest", cmd->manifest_path, "manifest path override");
    cmd->cli = sub;
    sub->callback([cmd, cmdline] { cmd->run(cmdline); });
}

// -------------------------------------------------------------- recommend

struct RecommendCmd {
    const CLI::App* cli = nullptr;
    std::string data, schema, out, manifest_path;
    double baseline_auc = 0.0;
    CLI::Option* baseline_opt = nullptr;
    std::size_t folds = 5;
    int tune_budget = 8;
    int threads = 1;
    std::uint64_t seed = 0;

    void run(const std::string& cmdline) {
        PhaseTimer total;
        Dataset ds = load_dataset(data, schema);
        bool computed = baseline_opt->count() == 0;
        double base;
        if (computed) {
            NestedCvOptions opts;
            opts.outer_folds = folds;
            opts.tune_budget = tune_budget;
            opts.threads = threads;
            base = nested_cv_auc(ds, std::nullopt, 0, seed, opts).mean_auc;
        } else {
            base = baseline_auc;
        }

        DecisionFeatures f;
        f.n_train = static_cast<double>(ds.rows());
        f.imbalance = imbalance_factor(ds);
        f.dof = static_cast<double>(degrees_of_freedom(ds));
        f.baseline_auc = base;
        DecisionModel model = published_decision_model();

        nlohmann::json doc;
        doc["probability"] = model.probability(f);
        doc["recommend"] = model.recommend(f);
        doc["features"] = {{"n_train", f.n_train},
                           {"imbalance", f.imbalance},
                           {"dof", f.dof},
                           {"baseline_auc", f.baseline_auc}};
        doc["baseline_auc_computed"] = computed;
        emit(doc.dump(2) + "\n", out);

        ManifestSink sink;
        sink.path = !manifest_path.empty() ? manifest_path
                    : !out.empty()         ? out + ".manifest.json"
                                           : "";
        sink.manifest.command_line = cmdline;
        sink.note_config(cli);
        if (computed) sink.manifest.seeds = {seed};
        sink.add_input("data", data);
        sink.add_input("schema", schema);
        put(sink.manifest.settings, "data", data);
        put(sink.manifest.settings, "schema", schema);
        put(sink.manifest.settings, "folds", folds);
        put(sink.manifest.settings, "tune_budget", tune_budget);
        put(sink.manifest.settings, "threads", threads);
        put(sink.manifest.settings, "seed", seed);
        put(sink.manifest.settings, "baseline_auc",
            computed ? std::string("computed") : format_double(base));
        put(sink.manifest.settings, "out", out);
        sink.finish(total);
    }
};

void add_recommend(CLI::App& app, const std::string& cmdline) {
    auto cmd = std::make_shared<RecommendCmd>();
    CLI::App* sub =
        app.add_subcommand("recommend", "Screen whether augmentation is worth running");
    sub->add_option("--data", cmd->data, "input CSV")->required();
    sub->add_option("--schema", cmd->schema, "schema JSON")->required();
    cmd->baseline_opt = sub->add_option("--baseline-auc", cmd->baseline_auc,
                                        "known baseline AUC; skips cross-validation");
    sub->add_option("--folds", cmd->folds, "outer folds for the computed baseline")
        ->default_val(5);
    sub->add_option("--tune-budget", cmd->tune_budget, "hyperparameter draws per fold")
        ->default_val(8);
    sub->add_option("--threads", cmd->threads, "worker threads")
        ->envname("AUGMENTOR_THREADS")
        ->default_val(1);
    sub->add_option("--seed", cmd->seed, "RNG seed")->default_val(0);
    sub->add_option("--out", cmd->out, "write the JSON here instead of stdout");
    sub->add_option("--manifest", cmd->manifest_path, "manifest path override");
    cmd->cli = sub;
    sub->callback([cmd, cmdline] { cmd->run(cmdline); });
}

// ---------------------------------------------------------- synth/augment

struct GenerateCmd {
    const CLI::App* cli = nullptr;
    bool include_original = false;
    std::string data, schema, out, manifest_path;
    std::string model = "seq";
    std::string external_cmd, external_workdir;
    bool external_strict = false;
    std::size_t nprime = 0;
    std::uint64_t seed = 0;

    void run(const std::string& cmdline) {
        PhaseTimer total;
        refuse_overwriting_inputs(out, {data, schema});
        Dataset ds = load_dataset(data, schema);
        SynthesizerSpec spec = make_spec(model, derive_seed(seed, hash_string_seed("synth_fit")),
                                         external_cmd, external_workdir, external_strict);
        auto gen = make_synthesizer(spec);
        gen->fit(ds);
        Dataset synthetic =
            gen->generate(nprime, derive_seed(seed, hash_string_seed("synth_gen")));
        emit(csv_text(include_original ? concat(ds, synthetic) : synthetic), out);

        ManifestSink sink;
        sink.path = !manifest_path.empty() ? manifest_path
                    : !out.empty()         ? out + ".manifest.json"
                                           : "";
        sink.manifest.command_line = cmdline;
        sink.note_config(cli);
        sink.manifest.seeds = {seed};
        sink.add_input("data", data);
        sink.add_input("schema", schema);
        put(sink.manifest.settings, "data", data);
        put(sink.manifest.settings, "schema", schema);
        put(sink.manifest.settings, "synth", model);
        put(sink.manifest.settings, "nprime", nprime);
        put(sink.manifest.settings, "seed", seed);
        put(sink.manifest.settings, "out", out);
        if (spec.kind == SynthKind::external) {
            put(sink.manifest.settings, "external_cmd", external_cmd);
            put(sink.manifest.settings, "external_workdir", external_workdir);
            put(sink.manifest.settings, "external_strict", external_strict);
        }
        sink.finish(total);
    }
};

void add_generate(CLI::App& app, const std::string& cmdline, bool include_original) {
    auto cmd = std::make_shared<GenerateCmd>();
    cmd->include_original = include_original;
    CLI::App* sub = app.add_subcommand(
        include_original ? "augment" : "synth",
        include_original ? "Append synthetic rows to the original dataset"
                         : "Generate synthetic rows from a fitted model");
    sub->add_option("--data", cmd->data, "input CSV")->required();
    sub->add_option("--schema", cmd->schema, "schema JSON")->required();
    sub->add_option("--synth", cmd->model, "generator kind")
        ->check(CLI::IsMember({"seq", "bn", "bootstrap", "external"}))
        ->default_val("seq");
    sub->add_option("--nprime", cmd->nprime, "synthetic rows to draw")->required();
    sub->add_option("--seed", cmd->seed, "RNG seed")->default_val(0);
    sub->add_option("--out", cmd->out, "output CSV; stdout when omitted");
    sub->add_option("--manifest", cmd->manifest_path, "manifest path override");
    sub->add_option("--external-cmd", cmd->external_cmd, "external adapter command");
    sub->add_option("--external-workdir", cmd->external_workdir, "external adapter scratch dir");
    sub->add_flag("--external-strict", cmd->external_strict,
                  "reject adapter rows with undeclared levels");
    cmd->cli = sub;
    sub->callback([cmd, cmdline] { cmd->run(cmdline); });
}

// ------------------------------------------------------------------ sweep

struct SweepCmd {
    const CLI::App* cli = nullptr;
    std::string data, schema, out_dir, manifest_path;
    std::vector<std::string> models;
    std::string external_cmd, external_workdir;
    bool external_strict = false;
    std::uint64_t seed = 0;
    std::uint64_t series_seed = 0;
    CLI::Option* series_seed_opt = nullptr;
    std::size_t max_nprime = 0;
    std::size_t folds = 5;
    int tune_budget = 8;
    int threads = 1;
    bool force = false;

    void run(const std::string& cmdline) {
        PhaseTimer total;
        if (models.empty()) models = {"seq", "bn"};
        Dataset ds = load_dataset(data, schema);
        std::vector<SynthesizerSpec> specs;
        for (const std::string& m : models)
            specs.push_back(make_spec(m, 0, external_cmd, external_workdir, external_strict));

        std::uint64_t resolved_series_seed =
            series_seed_opt->count() > 0 ? series_seed
                                         : derive_seed(seed, hash_string_seed("series"));
        AugmentationSeries series = augmentation_series(resolved_series_seed);

        std::filesystem::create_directories(out_dir);
        SweepOptions options;
        options.outer_folds = folds;
        options.tune_budget = tune_budget;
        options.threads = threads;
        options.force = force;
        options.max_nprime = max_nprime;
        options.cells_path = (std::filesystem::path(out_dir) / "cells.csv").string();

        SweepResult result = run_sweep(ds, specs, series, seed, options);

        auto dir = std::filesystem::path(out_dir);
        write_text_file(dir / "summary.json", sweep_summary_json(result));
        std::string table = render_model_best(per_model_best(result));
        write_text_file(dir / "models.txt", table);
        if (!result.curve_best.empty()) {
            write_text_file(dir / "curve_best.csv", curve_csv(result.curve_best));
            write_text_file(dir / "curve_resample.csv", curve_csv(result.curve_resample));
        }

        std::cout << table;
        std::cout << "baseline_auc " << format_auc(result.baseline_auc) << '\n';
        std::cout << "best " << result.best.synthesizer << ' ' << result.best.n_prime << ' '
                  << format_auc(result.best.augmented_auc) << ' '
                  << format_percent(result.best.relative_auc_percent) << '\n';
        std::cout << "resampled_auc " << format_auc(result.resampled_auc) << '\n';
        std::cout << "diversity_best " << format_auc(result.diversity_best) << '\n';
        std::cout << "diversity_resample " << format_auc(result.diversity_resample) << '\n';

        ManifestSink sink;
        sink.path = !manifest_path.empty() ? manifest_path : (dir / "manifest.json").string();
        sink.manifest.command_line = cmdline;
        sink.note_config(cli);
        sink.manifest.seeds = {seed, resolved_series_seed};
        sink.add_input("data", data);
        sink.add_input("schema", schema);
        put(sink.manifest.settings, "data", data);
        put(sink.manifest.settings, "schema", schema);
        std::string joined;
        for (const std::string& m : models) joined += (joined.empty() ? "" : ",") + m;
        put(sink.manifest.settings, "synth", joined);
        put(sink.manifest.settings, "seed", seed);
        put(sink.manifest.settings, "series_seed", resolved_series_seed);
        put(sink.manifest.settings, "series_base", result.cells.empty() ? 0.0 : series.b);
        put(sink.manifest.settings, "max_nprime", max_nprime);
        put(sink.manifest.settings, "folds", folds);
        put(sink.manifest.settings, "tune_budget", tune_budget);
        put(sink.manifest.settings, "threads", threads);
        put(sink.manifest.settings, "force", force);
        put(sink.manifest.settings, "out", out_dir);
        sink.finish(total);
    }
};

void add_sweep(CLI::App& app, const std::string& cmdline) {
    auto cmd = std::make_shared<SweepCmd>();
    CLI::App* sub = app.add_subcommand(
        "sweep", "Search augmentation levels for the best cross-validated AUC");
    sub->add_option("--data", cmd->data, "input CSV")->required();
    sub->add_option("--schema", cmd->schema, "schema JSON")->required();
    sub->add_option("--synth", cmd->models, "generator kinds to race (repeatable)")
        ->check(CLI::IsMember({"seq", "bn", "bootstrap", "external"}));
    sub->add_option("--seed", cmd->seed, "RNG seed")->default_val(0);
    cmd->series_seed_opt = sub->add_option("--series-seed", cmd->series_seed,
                                           "seed for the size schedule; derived when absent");
    sub->add_option("--max-nprime", cmd->max_nprime,
                    "skip schedule entries above this; 0 keeps all")
        ->default_val(0);
    sub->add_option("--folds", cmd->folds, "outer folds")->default_val(5);
    sub->add_option("--tune-budget", cmd->tune_budget, "hyperparameter draws per fold")
        ->default_val(8);
    sub->add_option("--threads", cmd->threads, "worker threads")
        ->envname("AUGMENTOR_THREADS")
        ->default_val(1);
    sub->add_flag("--force", cmd->force, "run even when the screen advises against it");
    sub->add_option("--out", cmd->out_dir, "output directory")->required();
    sub->add_option("--manifest", cmd->manifest_path, "manifest path override");
    sub->add_option("--external-cmd", cmd->external_cmd, "external adapter command");
    sub->add_option("--external-workdir", cmd->external_workdir, "external adapter scratch dir");
    sub->add_flag("--external-strict", cmd->external_strict,
                  "reject adapter rows with undeclared levels");
    cmd->cli = sub;
    sub->callback([cmd, cmdline] { cmd->run(cmdline); });
}

// --------------------------------------------------------------- evaluate

struct EvaluateCmd {
    const CLI::App* cli = nullptr;
    std::string data, schema, out, manifest_path;
    std::string model;
    std::string external_cmd, external_workdir;
    bool external_strict = false;
    std::size_t nprime = 0;
    std::size_t folds = 5;
    int tune_budget = 8;
    int threads = 1;
    std::uint64_t seed = 0;
    bool leak_fit_on_all = false;

    void run(const std::string& cmdline) {
        PhaseTimer total;
        Dataset ds = load_dataset(data, schema);
        std::optional<SynthesizerSpec> spec;
        if (!model.empty())
            spec = make_spec(model, 0, external_cmd, external_workdir, external_strict);
        if (spec.has_value() && nprime == 0)
            throw UsageError("--synth needs --nprime greater than zero");

        NestedCvOptions opts;
        opts.outer_folds = folds;
        opts.tune_budget = tune_budget;
        opts.threads = threads;
        opts.deliberate_leakage = leak_fit_on_all;
        NestedCvResult r = nested_cv_auc(ds, spec, nprime, seed, opts);

        nlohmann::json doc;
        doc["mean_auc"] = r.mean_auc;
        doc["folds"] = nlohmann::json::array();
        for (const NestedCvFold& f : r.folds)
            doc["folds"].push_back({{"auc", f.auc},
                                    {"train_rows", f.train_rows},
                                    {"test_rows", f.test_rows},
                                    {"tune_cv_auc", f.tune_cv_auc}});
        emit(doc.dump(2) + "\n", out);

        ManifestSink sink;
        sink.path = !manifest_path.empty() ? manifest_path
                    : !out.empty()         ? out + ".manifest.json"
                                           : "";
        sink.manifest.command_line = cmdline;
        sink.note_config(cli);
        sink.manifest.seeds = {seed};
        sink.add_input("data", data);
        sink.add_input("schema", schema);
        put(sink.manifest.settings, "data", data);
        put(sink.manifest.settings, "schema", schema);
        put(sink.manifest.settings, "synth", model.empty() ? "none" : model);
        put(sink.manifest.settings, "nprime", nprime);
        put(sink.manifest.settings, "folds", folds);
        put(sink.manifest.settings, "tune_budget", tune_budget);
        put(sink.manifest.settings, "threads", threads);
        put(sink.manifest.settings, "seed", seed);
        put(sink.manifest.settings, "leak_fit_on_all", leak_fit_on_all);
        put(sink.manifest.settings, "out", out);
        sink.finish(total);
    }
};

void add_evaluate(CLI::App& app, const std::string& cmdline) {
    auto cmd = std::make_shared<EvaluateCmd>();
    CLI::App* sub = app.add_subcommand(
        "evaluate", "Nested cross-validated AUC, optionally with augmentation");
    sub->add_option("--data", cmd->data, "input CSV")->required();
    sub->add_option("--schema", cmd->schema, "schema JSON")->required();
    sub->add_option("--synth", cmd->model, "augment each training fold with this generator")
        ->check(CLI::IsMember({"seq", "bn", "bootstrap", "external"}));
    sub->add_option("--nprime", cmd->nprime, "synthetic rows per fold")->default_val(0);
    sub->add_option("--folds", cmd->folds, "outer folds")->default_val(5);
    sub->add_option("--tune-budget", cmd->tune_budget, "hyperparameter draws per fold")
        ->default_val(8);
    sub->add_option("--threads", cmd->threads, "worker threads")
        ->envname("AUGMENTOR_THREADS")
        ->default_val(1);
    sub->add_option("--seed", cmd->seed, "RNG seed")->default_val(0);
    sub->add_flag("--leak-fit-on-all", cmd->leak_fit_on_all,
                  "diagnostic: fit the generator on all rows to measure leakage inflation");
    sub->add_option("--out", cmd->out, "write the JSON here instead of stdout");
    sub->add_option("--manifest", cmd->manifest_path, "manifest path override");
    sub->add_option("--external-cmd", cmd->external_cmd, "external adapter command");
    sub->add_option("--external-workdir", cmd->external_workdir, "external adapter scratch dir");
    sub->add_flag("--external-strict", cmd->external_strict,
                  "reject adapter rows with undeclared levels");
    cmd->cli = sub;
    sub->callback([cmd, cmdline] { cmd->run(cmdline); });
}

// -------------------------------------------------------------- diversity

struct DiversityCmd {
    const CLI::App* cli = nullptr;
    std::string base, augmented, schema, out, curve_path, manifest_path;
    std::size_t trees = 100;
    std::size_t subsample = 256;
    std::uint64_t seed = 0;

    void run(const std::string& cmdline) {
        PhaseTimer total;
        refuse_overwriting_inputs(curve_path, {base, augmented, schema});
        Schema s = load_schema(schema);
        Dataset base_ds = load_csv(base, s).data;
        Dataset aug_ds = load_csv(augmented, s).data;
        EifParams params;
        params.trees = trees;
        params.subsample = subsample;
        DiversityResult r = diversity_added(base_ds, aug_ds, params, seed);

        nlohmann::json doc;
        doc["diversity"] = r.score;
        doc["points"] = r.points.size();
        emit(doc.dump(2) + "\n", out);
        if (!curve_path.empty()) write_text_file(curve_path, curve_csv(r.points));

        ManifestSink sink;
        sink.path = !manifest_path.empty() ? manifest_path
                    : !out.empty()         ? out + ".manifest.json"
                                           : "";
        sink.manifest.command_line = cmdline;
        sink.note_config(cli);
        sink.manifest.seeds = {seed};
        sink.add_input("base", base);
        sink.add_input("augmented", augmented);
        sink.add_input("schema", schema);
        put(sink.manifest.settings, "base", base);
        put(sink.manifest.settings, "augmented", augmented);
        put(sink.manifest.settings, "schema", schema);
        put(sink.manifest.settings, "trees", trees);
        put(sink.manifest.settings, "subsample", subsample);
        put(sink.manifest.settings, "seed", seed);
        put(sink.manifest.settings, "curve", curve_path);
        put(sink.manifest.settings, "out", out);
        sink.finish(total);
    }
};

void add_diversity(CLI::App& app, const std::string& cmdline) {
    auto cmd = std::make_shared<DiversityCmd>();
    CLI::App* sub = app.add_subcommand(
        "diversity", "Score how much outlying content the augmented rows add");
    sub->add_option("--base", cmd->base, "original CSV")->required();
    sub->add_option("--augmented", cmd->augmented, "synthetic or augmented CSV")->required();
    sub->add_option("--schema", cmd->schema, "schema JSON")->required();
    sub->add_option("--curve", cmd->curve_path, "also write the 100-point curve CSV here");
    sub->add_option("--trees", cmd->trees, "isolation forest size")->default_val(100);
    sub->add_option("--subsample", cmd->subsample, "rows per tree")->default_val(256);
    sub->add_option("--seed", cmd->seed, "RNG seed")->default_val(0);
    sub->add_option("--out", cmd->out, "write the JSON here instead of stdout");
    sub->add_option("--manifest", cmd->manifest_path, "manifest path override");
    cmd->cli = sub;
    sub->callback([cmd, cmdline] { cmd->run(cmdline); });
}

// --------------------------------------------------------------- permtest

std::optional<double> parse_double(const std::string& s) {
    try {
        std::size_t idx = 0;
        double v = std::stod(s, &idx);
        if (idx != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<std::pair<double, double>> read_pairs(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto records = parse_csv_records(buf.str(), path);
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
        if (rec.size() != 2)
            throw DataError(path + " record " + std::to_string(i + 1) +
                            ": expected two columns, got " + std::to_string(rec.size()));
        auto a = parse_double(rec[0]);
        auto b = parse_double(rec[1]);
        if (!a || !b) {
            if (i == 0) continue;  // header row
            throw DataError(path + " record " + std::to_string(i + 1) +
                            ": not a pair of numbers");
        }
        pairs.push_back({*a, *b});
    }
    if (pairs.empty()) throw DataError(path + ": no numeric pairs found");
    return pairs;
}

struct PermtestCmd {
    const CLI::App* cli = nullptr;
    std::string pairs_path, tail = "greater", out, manifest_path;
    std::uint64_t mc_draws = 0;
    std::uint64_t seed = 0;

    void run(const std::string& cmdline) {
        PhaseTimer total;
        auto pairs = read_pairs(pairs_path);
        Tail t = tail_from_string(tail);
        PermutationTestResult r = mc_draws == 0
                                      ? exact_permutation_test(pairs, t)
                                      : mc_permutation_test(pairs, t, mc_draws, seed);
        emit(permutation_json(r), out);
        std::cerr << "p " << format_p_value(r.p_value) << " (" << r.favorable << "/"
                  << r.enumerated << ")\n";

        ManifestSink sink;
        sink.path = !manifest_path.empty() ? manifest_path
                    : !out.empty()         ? out + ".manifest.json"
                                           : "";
        sink.manifest.command_line = cmdline;
        sink.note_config(cli);
        if (mc_draws > 0) sink.manifest.seeds = {seed};
        sink.add_input("pairs", pairs_path);
        put(sink.manifest.settings, "pairs", pairs_path);
        put(sink.manifest.settings, "tail", tail);
        put(sink.manifest.settings, "mc", mc_draws);
        put(sink.manifest.settings, "seed", seed);
        put(sink.manifest.settings, "out", out);
        sink.finish(total);
    }
};

void add_permtest(CLI::App& app, const std::string& cmdline) {
    auto cmd = std::make_shared<PermtestCmd>();
    CLI::App* sub = app.add_subcommand(
        "permtest", "Paired permutation test over a two-column score CSV");
    sub->add_option("--pairs", cmd->pairs_path, "CSV of paired scores")->required();
    sub->add_option("--tail", cmd->tail, "alternative direction")
        ->check(CLI::IsMember({"greater", "less"}))
        ->default_val("greater");
    sub->add_option("--mc", cmd->mc_draws, "Monte Carlo draws; 0 enumerates exactly")
        ->default_val(0);
    sub->add_option("--seed", cmd->seed, "RNG seed for Monte Carlo mode")->default_val(0);
    sub->add_option("--out", cmd->out, "write the JSON here instead of stdout");
    sub->add_option("--manifest", cmd->manifest_path, "manifest path override");
    cmd->cli = sub;
    sub->callback([cmd, cmdline] { cmd->run(cmdline); });
}

// --------------------------------------------------------------- simulate

struct SimulateCmd {
    const CLI::App* cli = nullptr;
    std::string population, schema, out_dir, manifest_path;
    std::vector<std::string> models;
    std::string external_cmd, external_workdir;
    bool external_strict = false;
    std::size_t benchmark_rows = 2000;
    double signal = BenchmarkSpec{}.signal;
    std::vector<std::size_t> n0_grid;
    std::size_t series_count = 2;
    std::size_t max_nprime = 5000;
    double train_fraction = 0.70;
    int tune_budget = 8;
    int threads = 1;
    std::uint64_t seed = 0;
    std::string label;
    bool paper_scale = false;

    void run(const std::string& cmdline) {
        PhaseTimer total;
        if (models.empty()) models = {"seq", "bn"};
        std::vector<SynthesizerSpec> specs;
        for (const std::string& m : models)
            specs.push_back(make_spec(m, 0, external_cmd, external_workdir, external_strict));

        Dataset pop = [&] {
            if (!population.empty()) {
                if (schema.empty())
                    throw UsageError("--population needs --schema");
                return load_dataset(population, schema);
            }
            BenchmarkSpec bench;
            bench.rows = benchmark_rows;
            bench.signal = signal;
            return benchmark_population(bench,
                                        derive_seed(seed, hash_string_seed("population")));
        }();

        SimulateOptions opts = paper_scale ? paper_scale_options() : SimulateOptions{};
        if (!n0_grid.empty()) opts.n0_grid = n0_grid;
        if (!paper_scale) {
            opts.series_count = series_count;
            opts.max_nprime = max_nprime;
        }
        opts.train_fraction = train_fraction;
        opts.tune_budget = tune_budget;
        opts.threads = threads;
        opts.dataset_label = label.empty() ? (population.empty() ? "benchmark" : population)
                                           : label;

        SimulationResult r = simulate_part1(pop, specs, seed, opts);

        std::filesystem::create_directories(out_dir);
        auto dir = std::filesystem::path(out_dir);

        std::string baselines = "n0,auc\n";
        for (const SimulationBaseline& b : r.baselines)
            baselines += std::to_string(b.n0) + "," + format_double(b.auc) + "\n";
        write_text_file(dir / "baselines.csv", baselines);

        std::string cells = "n0,synthesizer,series,n_prime,auc\n";
        for (const SimulationCell& c : r.cells)
            cells += std::to_string(c.n0) + "," + c.synthesizer + "," +
                     std::to_string(c.series_index) + "," + std::to_string(c.n_prime) + "," +
                     format_double(c.auc) + "\n";
        write_text_file(dir / "cells.csv", cells);

        std::string records = "n0,imbalance,dof,baseline_auc,augmentation_helped,group\n";
        std::size_t helped = 0;
        for (const DecisionExample& ex : r.records) {
            records += format_double(ex.features.n_train) + "," +
                       format_double(ex.features.imbalance) + "," +
                       format_double(ex.features.dof) + "," +
                       format_double(ex.features.baseline_auc) + "," +
                       (ex.augmentation_helped ? "1" : "0") + "," + ex.group + "\n";
            if (ex.augmentation_helped) ++helped;
        }
        write_text_file(dir / "records.csv", records);

        std::cout << "evaluations " << r.cells.size() << ", baselines "
                  << r.baselines.size() << ", augmentation helped in " << helped << "/"
                  << r.records.size() << " conditions\n";

        ManifestSink sink;
        sink.path = !manifest_path.empty() ? manifest_path : (dir / "manifest.json").string();
        sink.manifest.command_line = cmdline;
        sink.note_config(cli);
        sink.manifest.seeds = {seed};
        sink.add_input("population", population);
        sink.add_input("schema", schema);
        put(sink.manifest.settings, "population",
            population.empty() ? "benchmark" : population);
        put(sink.manifest.settings, "schema", schema);
        if (population.empty()) {
            put(sink.manifest.settings, "benchmark_rows", benchmark_rows);
            put(sink.manifest.settings, "signal", signal);
        }
        std::string joined;
        for (const std::string& m : models) joined += (joined.empty() ? "" : ",") + m;
        put(sink.manifest.settings, "synth", joined);
        std::string grid;
        for (std::size_t v : opts.n0_grid) grid += (grid.empty() ? "" : ",") + std::to_string(v);
        put(sink.manifest.settings, "n0_grid", grid);
        put(sink.manifest.settings, "series", opts.series_count);
        put(sink.manifest.settings, "max_nprime", opts.max_nprime);
        put(sink.manifest.settings, "train_fraction", opts.train_fraction);
        put(sink.manifest.settings, "tune_budget", opts.tune_budget);
        put(sink.manifest.settings, "threads", opts.threads);
        put(sink.manifest.settings, "seed", seed);
        put(sink.manifest.settings, "label", opts.dataset_label);
        put(sink.manifest.settings, "paper_scale", paper_scale);
        put(sink.manifest.settings, "out", out_dir);
        sink.finish(total);
    }
};

void add_simulate(CLI::App& app, const std::string& cmdline) {
    auto cmd = std::make_shared<SimulateCmd>();
    CLI::App* sub = app.add_subcommand(
        "simulate", "Sweep augmentation benefit over base sizes of a population");
    sub->add_option("--population", cmd->population, "population CSV; omitted uses the benchmark generator");
    sub->add_option("--schema", cmd->schema, "schema JSON for --population");
    sub->add_option("--benchmark-rows", cmd->benchmark_rows, "generated population size")
        ->default_val(2000);
    sub->add_option("--signal", cmd->signal, "benchmark signal strength")
        ->default_val(BenchmarkSpec{}.signal);
    sub->add_option("--synth", cmd->models, "generator kinds (repeatable)")
        ->check(CLI::IsMember({"seq", "bn", "bootstrap", "external"}));
    auto* n0 = sub->add_option("--n0", cmd->n0_grid, "base sizes (repeatable)");
    auto* series = sub->add_option("--series", cmd->series_count, "size schedules per draw")
                       ->default_val(2);
    auto* cap = sub->add_option("--max-nprime", cmd->max_nprime,
                                "skip schedule entries above this; 0 keeps all")
                    ->default_val(5000);
    auto* full = sub->add_flag("--full-scale", cmd->paper_scale,
                               "forty base sizes, ten series, no size cap");
    full->excludes(n0)->excludes(series)->excludes(cap);
    sub->add_option("--train-fraction", cmd->train_fraction, "population split for training")
        ->default_val(0.70);
    sub->add_option("--tune-budget", cmd->tune_budget, "hyperparameter draws per base")
        ->default_val(8);
    sub->add_option("--threads", cmd->threads, "worker threads")
        ->envname("AUGMENTOR_THREADS")
        ->default_val(1);
    sub->add_option("--seed", cmd->seed, "RNG seed")->default_val(0);
    sub->add_option("--label", cmd->label, "group label stamped on emitted records");
    sub->add_option("--out", cmd->out_dir, "output directory")->required();
    sub->add_option("--manifest", cmd->manifest_path, "manifest path override");
    sub->add_option("--external-cmd", cmd->external_cmd, "external adapter command");
    sub->add_option("--external-workdir", cmd->external_workdir, "external adapter scratch dir");
    sub->add_flag("--external-strict", cmd->external_strict,
                  "reject adapter rows with undeclared levels");
    cmd->cli = sub;
    sub->callback([cmd, cmdline] { cmd->run(cmdline); });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic-data augmentation toolkit for small tabular datasets"};
    app.set_version_flag("--version", artifact_version());
    app.set_config("--config", "",
                   "read option defaults from an INI/TOML file with [subcommand] sections");
    app.require_subcommand(1);

    const std::string cmdline = join_argv(argc, argv);
    add_profile(app, cmdline);
    add_recommend(app, cmdline);
    add_generate(app, cmdline, false);  // synth
    add_generate(app, cmdline, true);   // augment
    add_sweep(app, cmdline);
    add_evaluate(app, cmdline);
    add_diversity(app, cmdline);
    add_permtest(app, cmdline);
    add_simulate(app, cmdline);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success))
            return app.exit(e);  // --help / --version
        std::cerr << "error: " << e.what() << '\n' << app.help() << std::flush;
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
