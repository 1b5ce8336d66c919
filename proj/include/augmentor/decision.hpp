#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace augmentor {

// Feature vector for the should-we-augment screen, in fixed order:
// training size, class imbalance ratio, degrees of freedom, baseline AUC.
struct DecisionFeatures {
    double n_train = 0.0;
    double imbalance = 0.0;
    double dof = 0.0;
    double baseline_auc = 0.0;

    std::vector<double> as_vector() const {
        return {n_train, imbalance, dof, baseline_auc};
    }
    static const std::vector<std::string>& names();
};

struct DecisionModel {
    double intercept = 0.0;
    std::vector<double> coefficients;  // aligned with DecisionFeatures order

    double linear_score(const DecisionFeatures& f) const;
    double probability(const DecisionFeatures& f) const;
    bool recommend(const DecisionFeatures& f) const;  // probability > 0.5
};

// Reference coefficients shipped with the tool, estimated on the benchmark
// suite of augmentation experiments.
DecisionModel published_decision_model();

struct DecisionExample {
    DecisionFeatures features;
    bool augmentation_helped = false;
    // examples from the same source dataset share a group id so leave-one-out
    // evaluation can hold out whole datasets
    std::string group;
};

struct TrainedDecisionModel {
    DecisionModel model;
    int iterations = 0;
    bool converged = false;
    // quasi-separation: some weights diverged, probabilities saturate
    bool separation_suspected = false;
    double log_likelihood = 0.0;
};

// Maximum-likelihood logistic regression via iteratively reweighted least
// squares. tol is the max absolute coefficient change declaring convergence.
TrainedDecisionModel train_decision_model(const std::vector<DecisionExample>& examples,
                                          double tol = 1e-8, int max_iter = 500);

struct LoocvReport {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy = 0.0;
    std::vector<std::string> groups;  // distinct groups, evaluation order
};

// Leave-one-group-out: refit without each group, score the held-out examples.
LoocvReport loocv_by_group(const std::vector<DecisionExample>& examples);

// coefficient * sample standard deviation of the feature, for comparing
// effect sizes across differently scaled features.
std::vector<double> standardized_coefficients(const DecisionModel& model,
                                              const std::vector<DecisionExample>& examples);

} // namespace augmentor
