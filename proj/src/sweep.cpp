#include "augmentor/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>

#include "augmentor/complexity.hpp"
#include "augmentor/decision.hpp"
#include "augmentor/diversity.hpp"
#include "augmentor/error.hpp"
#include "augmentor/nested_cv.hpp"
#include "augmentor/parallel.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/sampling.hpp"
#include "augmentor/tuning.hpp"

namespace augmentor {

std::string sweep_cells_header() { return "synthesizer,n_prime,fold,auc"; }

std::string render_sweep_cell(const SweepCell& cell) {
    char auc[64];
    std::snprintf(auc, sizeof auc, "%.17g", cell.auc);
    return cell.synthesizer + "," + std::to_string(cell.n_prime) + "," +
           std::to_string(cell.fold) + "," + auc;
}

std::vector<SweepCell> read_sweep_cells(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {};
    std::string line;
    if (!std::getline(in, line)) return {};
    if (line != sweep_cells_header())
        throw DataError("sweep cells file '" + path + "': unexpected header '" + line + "'");
    std::vector<SweepCell> cells;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        auto c3 = line.find(',', c2 == std::string::npos ? c2 : c2 + 1);
        if (c3 == std::string::npos)
            throw DataError("sweep cells file '" + path + "' line " +
                            std::to_string(lineno) + ": expected 4 fields");
        SweepCell cell;
        cell.synthesizer = line.substr(0, c1);
        try {
            cell.n_prime = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
            cell.fold = std::stoull(line.substr(c2 + 1, c3 - c2 - 1));
            cell.auc = std::stod(line.substr(c3 + 1));
        } catch (const std::exception&) {
            throw DataError("sweep cells file '" + path + "' line " +
                            std::to_string(lineno) + ": malformed numbers");
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

namespace {

struct TaskSpec {
    std::string tag;
    int synth_index = -1;  // -1: baseline or control
    std::size_t n_prime = 0;
    std::size_t fold = 0;
};

} // namespace

SweepResult run_sweep(const Dataset& ds, const std::vector<SynthesizerSpec>& synthesizers,
                      const AugmentationSeries& series, std::uint64_t seed,
                      const SweepOptions& options) {
    if (synthesizers.empty()) throw DataError("sweep: no synthesizers given");
    {
        std::set<std::string> tags;
        for (const SynthesizerSpec& spec : synthesizers) {
            spec.validate();
            if (!tags.insert(spec.tag()).second)
                throw DataError("sweep: duplicate synthesizer '" + spec.tag() + "'");
            if (spec.tag() == "baseline" || spec.tag() == "resample_control")
                throw DataError("sweep: reserved synthesizer tag '" + spec.tag() + "'");
        }
    }
    if (series.sizes.empty()) throw DataError("sweep: empty augmentation series");
    if (options.outer_folds < 2) throw DataError("sweep: need at least 2 outer folds");

    std::vector<std::size_t> sizes;
    for (std::size_t v : series.sizes) {
        if (options.max_nprime != 0 && v > options.max_nprime) continue;
        if (!sizes.empty() && sizes.back() == v) continue;  // series is sorted
        sizes.push_back(v);
    }
    if (sizes.empty())
        throw DataError("sweep: the size cap removed every entry of the series");

    const std::size_t folds = options.outer_folds;
    std::vector<std::size_t> fold_of = stratified_fold_ids(
        ds, folds, derive_seed(seed, hash_string_seed("outer_folds")));
    std::vector<Dataset> train, test;
    train.reserve(folds);
    test.reserve(folds);
    for (std::size_t k = 0; k < folds; ++k) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t r = 0; r < ds.rows(); ++r)
            (fold_of[r] == k ? test_rows : train_rows).push_back(r);
        train.push_back(ds.select(train_rows));
        test.push_back(ds.select(test_rows));
    }

    // One tune per fold, on the un-augmented partition, reused for the
    // baseline and every cell of that fold: cells then differ only in the
    // synthetic rows, not in hyperparameter luck.
    std::vector<GbdtParams> params(folds);
    for (std::size_t k = 0; k < folds; ++k)
        params[k] = tune(train[k], HyperRanges{}, options.tune_budget,
                         derive_seed(seed, hash_string_seed("tune"), k),
                         options.threads, options.tune_folds)
                        .params;

    // resumable cell log
    std::vector<SweepCell> existing;
    std::ofstream log;
    if (!options.cells_path.empty()) {
        existing = read_sweep_cells(options.cells_path);
        bool fresh = !std::filesystem::exists(options.cells_path) ||
                     std::filesystem::file_size(options.cells_path) == 0;
        log.open(options.cells_path, std::ios::app);
        if (!log)
            throw DataError("sweep: cannot open cells file '" + options.cells_path + "'");
        if (fresh) {
            log << sweep_cells_header() << '\n';
            log.flush();
        }
    }
    std::size_t consumed = 0;

    SweepResult result;

    auto baseline_auc_for_fold = [&](std::size_t k) {
        return fit_and_score(train[k], test[k], params[k],
                             derive_seed(seed, hash_string_seed("baseline"), k,
                                         hash_string_seed("final_fit")));
    };

    auto cell_auc = [&](const SynthesizerSpec& spec, const std::string& tag,
                        std::size_t v, std::size_t k) {
        // zero added rows IS the baseline; reuse its stream so the values
        // agree exactly
        if (v == 0) return baseline_auc_for_fold(k);
        std::uint64_t task_seed = derive_seed(seed, hash_string_seed("cell:" + tag), v, k);
        SynthesizerSpec fitted = spec;
        fitted.seed = derive_seed(task_seed, hash_string_seed("synth_fit"));
        auto gen = make_synthesizer(fitted);
        gen->fit(train[k]);
        Dataset synthetic = gen->generate(v, derive_seed(task_seed, hash_string_seed("synth_gen")));
        return fit_and_score(concat(train[k], synthetic), test[k], params[k],
                             derive_seed(task_seed, hash_string_seed("final_fit")));
    };

    // Runs one phase of the task pool. Tasks already present in the cell log
    // are reused; fresh results are appended in canonical task order no
    // matter which worker finishes first.
    auto execute_phase = [&](const std::vector<TaskSpec>& tasks,
                             const std::function<double(const TaskSpec&)>& compute) {
        const std::size_t n = tasks.size();
        std::vector<SweepCell> slots(n);
        std::vector<char> ready(n, 0);
        std::size_t reused = 0;
        while (reused < n && consumed < existing.size()) {
            const SweepCell& row = existing[consumed];
            const TaskSpec& t = tasks[reused];
            if (row.synthesizer != t.tag || row.n_prime != t.n_prime || row.fold != t.fold)
                throw DataError(
                    "sweep: cells file does not match this configuration at row " +
                    std::to_string(consumed + 1) + " (found " + render_sweep_cell(row) +
                    ", expected " + t.tag + "," + std::to_string(t.n_prime) + "," +
                    std::to_string(t.fold) + ")");
            slots[reused] = row;
            ready[reused] = 1;
            ++reused;
            ++consumed;
        }

        std::mutex mu;
        std::size_t flushed = reused;
        parallel_for(n, options.threads, [&](std::size_t i) {
            if (ready[i]) return;  // resumed from the log
            const TaskSpec& t = tasks[i];
            slots[i] = SweepCell{t.tag, t.n_prime, t.fold, compute(t)};
            std::lock_guard<std::mutex> lock(mu);
            ready[i] = 1;
            while (flushed < n && ready[flushed]) {
                if (log.is_open()) {
                    log << render_sweep_cell(slots[flushed]) << '\n';
                    log.flush();
                }
                ++flushed;
            }
        });
        result.cells.insert(result.cells.end(), slots.begin(), slots.end());
        return slots;
    };

    // baseline
    std::vector<TaskSpec> baseline_tasks;
    for (std::size_t k = 0; k < folds; ++k)
        baseline_tasks.push_back(TaskSpec{"baseline", -1, 0, k});
    std::vector<SweepCell> baseline_cells = execute_phase(
        baseline_tasks, [&](const TaskSpec& t) { return baseline_auc_for_fold(t.fold); });
    double baseline_sum = 0.0;
    for (const SweepCell& c : baseline_cells) baseline_sum += c.auc;
    result.baseline_auc = baseline_sum / static_cast<double>(folds);
    if (result.baseline_auc <= 0.0)
        throw DataError("sweep: degenerate baseline AUC");

    // augmentation screen
    if (!options.force) {
        DecisionFeatures f;
        f.n_train = static_cast<double>(ds.rows());
        f.imbalance = imbalance_factor(ds);
        f.dof = static_cast<double>(degrees_of_freedom(ds));
        f.baseline_auc = result.baseline_auc;
        DecisionModel screen = published_decision_model();
        if (!screen.recommend(f)) {
            char p[32];
            std::snprintf(p, sizeof p, "%.3f", screen.probability(f));
            throw DataError(
                "sweep: the augmentation screen advises against augmenting this "
                "dataset (probability " + std::string(p) + "); pass force to run anyway");
        }
    }

    // grid
    std::vector<TaskSpec> grid_tasks;
    for (std::size_t s = 0; s < synthesizers.size(); ++s)
        for (std::size_t v : sizes)
            for (std::size_t k = 0; k < folds; ++k)
                grid_tasks.push_back(
                    TaskSpec{synthesizers[s].tag(), static_cast<int>(s), v, k});
    std::vector<SweepCell> grid_cells = execute_phase(grid_tasks, [&](const TaskSpec& t) {
        return cell_auc(synthesizers[static_cast<std::size_t>(t.synth_index)], t.tag,
                        t.n_prime, t.fold);
    });

    result.grid.reserve(synthesizers.size() * sizes.size());
    std::size_t at = 0;
    for (std::size_t s = 0; s < synthesizers.size(); ++s) {
        for (std::size_t v : sizes) {
            double sum = 0.0;
            for (std::size_t k = 0; k < folds; ++k) sum += grid_cells[at + k].auc;
            at += folds;
            result.grid.push_back(
                GridEntry{synthesizers[s].tag(), v, sum / static_cast<double>(folds)});
        }
    }

    // argmax; ties prefer fewer synthetic rows, then earlier registration
    const GridEntry* best = &result.grid.front();
    for (const GridEntry& e : result.grid)
        if (e.mean_auc > best->mean_auc ||
            (e.mean_auc == best->mean_auc && e.n_prime < best->n_prime))
            best = &e;
    result.best.synthesizer = best->synthesizer;
    result.best.n_prime = best->n_prime;
    result.best.augmented_auc = best->mean_auc;
    result.best.relative_auc_percent =
        100.0 * (best->mean_auc - result.baseline_auc) / result.baseline_auc;

    // bootstrap control at the winning size
    SynthesizerSpec control;
    control.kind = SynthKind::bootstrap;
    control.config = BootstrapConfig{};
    std::vector<TaskSpec> control_tasks;
    for (std::size_t k = 0; k < folds; ++k)
        control_tasks.push_back(TaskSpec{"resample_control", -1, result.best.n_prime, k});
    std::vector<SweepCell> control_cells =
        execute_phase(control_tasks, [&](const TaskSpec& t) {
            return cell_auc(control, t.tag, t.n_prime, t.fold);
        });
    double control_sum = 0.0;
    for (const SweepCell& c : control_cells) control_sum += c.auc;
    result.resampled_auc = control_sum / static_cast<double>(folds);

    if (consumed < existing.size())
        throw DataError("sweep: cells file has " +
                        std::to_string(existing.size() - consumed) +
                        " extra rows beyond this configuration");

    // how much the winning generator widened the data, versus plain
    // resampling, averaged over the outer folds
    if (result.best.n_prime > 0) {
        const SynthesizerSpec* winner = nullptr;
        for (const SynthesizerSpec& spec : synthesizers)
            if (spec.tag() == result.best.synthesizer) winner = &spec;
        auto regenerate = [&](const SynthesizerSpec& spec, const std::string& tag,
                              std::size_t k) {
            std::uint64_t task_seed =
                derive_seed(seed, hash_string_seed("cell:" + tag), result.best.n_prime, k);
            SynthesizerSpec fitted = spec;
            fitted.seed = derive_seed(task_seed, hash_string_seed("synth_fit"));
            auto gen = make_synthesizer(fitted);
            gen->fit(train[k]);
            return gen->generate(result.best.n_prime,
                                 derive_seed(task_seed, hash_string_seed("synth_gen")));
        };
        double div_best = 0.0, div_resample = 0.0;
        auto accumulate = [&](std::vector<CurvePoint>& into, const DiversityResult& dr) {
            if (into.empty()) into.resize(dr.points.size());
            for (std::size_t j = 0; j < dr.points.size(); ++j) {
                into[j].threshold += dr.points[j].threshold / static_cast<double>(folds);
                into[j].reference_rate +=
                    dr.points[j].reference_rate / static_cast<double>(folds);
                into[j].candidate_rate +=
                    dr.points[j].candidate_rate / static_cast<double>(folds);
                into[j].excess += dr.points[j].excess / static_cast<double>(folds);
            }
        };
        for (std::size_t k = 0; k < folds; ++k) {
            Dataset best_rows = regenerate(*winner, result.best.synthesizer, k);
            DiversityResult dr_best = diversity_added(
                train[k], best_rows, options.eif,
                derive_seed(seed, hash_string_seed("diversity_best"), k));
            div_best += dr_best.score;
            accumulate(result.curve_best, dr_best);
            Dataset control_rows = regenerate(control, "resample_control", k);
            DiversityResult dr_ctrl = diversity_added(
                train[k], control_rows, options.eif,
                derive_seed(seed, hash_string_seed("diversity_resample"), k));
            div_resample += dr_ctrl.score;
            accumulate(result.curve_resample, dr_ctrl);
        }
        result.diversity_best = div_best / static_cast<double>(folds);
        result.diversity_resample = div_resample / static_cast<double>(folds);
    }

    return result;
}

std::vector<ModelBestRow> per_model_best(const SweepResult& result) {
    if (result.grid.empty()) throw DataError("sweep summary: no cells");
    std::vector<ModelBestRow> rows;
    for (const GridEntry& e : result.grid) {
        ModelBestRow* row = nullptr;
        for (ModelBestRow& r : rows)
            if (r.synthesizer == e.synthesizer) row = &r;
        if (row == nullptr) {
            rows.push_back(ModelBestRow{e.synthesizer, e.n_prime, result.baseline_auc,
                                        e.mean_auc, 0.0});
            row = &rows.back();
        } else if (e.mean_auc > row->augmented_auc) {
            // sizes ascend inside each synthesizer, so keeping the earlier
            // entry on ties prefers the smaller n'
            row->n_prime = e.n_prime;
            row->augmented_auc = e.mean_auc;
        }
    }
    for (ModelBestRow& r : rows)
        r.relative_auc_percent =
            100.0 * (r.augmented_auc - r.baseline_auc) / r.baseline_auc;
    return rows;
}

} // namespace augmentor
