#include "augmentor/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "augmentor/tabular_io.hpp"

namespace augmentor {

namespace {

std::string fixed(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

} // namespace

std::string format_auc(double v) { return fixed(v, "%.4f"); }
std::string format_percent(double v) { return fixed(v, "%.2f"); }
std::string format_p_value(double v) { return fixed(v, "%.4f"); }

std::string sweep_summary_json(const SweepResult& result) {
    nlohmann::json doc;
    doc["baseline_auc"] = result.baseline_auc;
    doc["grid"] = nlohmann::json::array();
    for (const GridEntry& e : result.grid) {
        doc["grid"].push_back({{"synthesizer", e.synthesizer},
                               {"n_prime", e.n_prime},
                               {"mean_auc", e.mean_auc}});
    }
    doc["best"] = {{"synthesizer", result.best.synthesizer},
                   {"n_prime", result.best.n_prime},
                   {"augmented_auc", result.best.augmented_auc},
                   {"relative_auc_percent", result.best.relative_auc_percent}};
    doc["resampled_auc"] = result.resampled_auc;
    doc["diversity_best"] = result.diversity_best;
    doc["diversity_resample"] = result.diversity_resample;
    doc["models"] = nlohmann::json::array();
    for (const ModelBestRow& row : per_model_best(result)) {
        doc["models"].push_back({{"synthesizer", row.synthesizer},
                                 {"n_prime", row.n_prime},
                                 {"baseline_auc", row.baseline_auc},
                                 {"augmented_auc", row.augmented_auc},
                                 {"relative_auc_percent", row.relative_auc_percent}});
    }
    return doc.dump(2) + "\n";
}

std::string render_model_best(const std::vector<ModelBestRow>& rows) {
    std::string out = "synthesizer n_prime baseline_auc augmented_auc relative_auc_percent\n";
    for (const ModelBestRow& row : rows) {
        out += row.synthesizer;
        out += ' ';
        out += std::to_string(row.n_prime);
        out += ' ';
        out += format_auc(row.baseline_auc);
        out += ' ';
        out += format_auc(row.augmented_auc);
        out += ' ';
        out += format_percent(row.relative_auc_percent);
        out += '\n';
    }
    return out;
}

std::string curve_csv_header() { return "threshold,base_rate,aug_rate,x_j"; }

std::string curve_csv(const std::vector<CurvePoint>& points) {
    std::string out = curve_csv_header() + "\n";
    for (const CurvePoint& p : points) {
        out += format_double(p.threshold);
        out += ',';
        out += format_double(p.reference_rate);
        out += ',';
        out += format_double(p.candidate_rate);
        out += ',';
        out += format_double(p.excess);
        out += '\n';
    }
    return out;
}

std::string permutation_json(const PermutationTestResult& result) {
    nlohmann::json doc;
    doc["observed_mean_diff"] = result.observed_mean_diff;
    doc["p_value"] = result.p_value;
    doc["tail"] = to_string(result.tail);
    doc["assignments"] = result.enumerated;
    doc["favorable"] = result.favorable;
    return doc.dump(2) + "\n";
}

} // namespace augmentor
