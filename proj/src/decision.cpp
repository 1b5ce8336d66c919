#include "augmentor/decision.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "augmentor/error.hpp"

namespace augmentor {

const std::vector<std::string>& DecisionFeatures::names() {
    static const std::vector<std::string> kNames{"n_train", "imbalance", "dof",
                                                 "baseline_auc"};
    return kNames;
}

double DecisionModel::linear_score(const DecisionFeatures& f) const {
    if (coefficients.size() != 4)
        throw DataError("decision model must have exactly 4 coefficients");
    std::vector<double> x = f.as_vector();
    double z = intercept;
    for (std::size_t i = 0; i < x.size(); ++i) z += coefficients[i] * x[i];
    return z;
}

double DecisionModel::probability(const DecisionFeatures& f) const {
    return 1.0 / (1.0 + std::exp(-linear_score(f)));
}

bool DecisionModel::recommend(const DecisionFeatures& f) const {
    return probability(f) > 0.5;
}

DecisionModel published_decision_model() {
    DecisionModel m;
    m.intercept = 6.75;
    m.coefficients = {-4.79e-5, -4.94e-2, 5.12e-4, -7.63};
    return m;
}

TrainedDecisionModel train_decision_model(const std::vector<DecisionExample>& examples,
                                          double tol, int max_iter) {
    const std::size_t n = examples.size();
    if (n < 5) throw DataError("decision training: need at least 5 examples");
    bool any_pos = false, any_neg = false;
    for (const auto& e : examples) (e.augmentation_helped ? any_pos : any_neg) = true;
    if (!any_pos || !any_neg)
        throw DataError("decision training: both outcomes must appear");

    constexpr std::size_t kP = 5;  // intercept + 4 features
    Eigen::MatrixXd X(n, kP);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> f = examples[i].features.as_vector();
        X(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (std::size_t j = 0; j < 4; ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = f[j];
        y(static_cast<Eigen::Index>(i)) = examples[i].augmentation_helped ? 1.0 : 0.0;
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(kP);
    TrainedDecisionModel out;
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd mu(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            double e = eta(static_cast<Eigen::Index>(i));
            double p = 1.0 / (1.0 + std::exp(-e));
            mu(static_cast<Eigen::Index>(i)) = p;
            w(static_cast<Eigen::Index>(i)) = std::max(p * (1.0 - p), 1e-12);
        }
        Eigen::MatrixXd XtW = X.transpose() * w.asDiagonal();
        Eigen::MatrixXd H = XtW * X;
        Eigen::VectorXd g = X.transpose() * (y - mu);
        // tiny ridge keeps the solve well posed under collinearity
        H.diagonal().array() += 1e-10;
        Eigen::VectorXd step = H.ldlt().solve(g);
        beta += step;
        out.iterations = iter + 1;
        if (step.cwiseAbs().maxCoeff() < tol) {
            out.converged = true;
            break;
        }
    }

    out.model.intercept = beta(0);
    out.model.coefficients = {beta(1), beta(2), beta(3), beta(4)};

    Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    bool saturated = true;
    for (std::size_t i = 0; i < n; ++i) {
        double e = eta(static_cast<Eigen::Index>(i));
        double p = 1.0 / (1.0 + std::exp(-e));
        double pc = std::min(std::max(p, 1e-15), 1.0 - 1e-15);
        ll += y(static_cast<Eigen::Index>(i)) > 0.5 ? std::log(pc) : std::log(1.0 - pc);
        if (p > 1e-8 && p < 1.0 - 1e-8) saturated = false;
    }
    out.log_likelihood = ll;
    out.separation_suspected = saturated || beta.cwiseAbs().maxCoeff() > 1e6;
    return out;
}

LoocvReport loocv_by_group(const std::vector<DecisionExample>& examples) {
    std::map<std::string, std::vector<std::size_t>> by_group;
    for (std::size_t i = 0; i < examples.size(); ++i)
        by_group[examples[i].group].push_back(i);
    if (by_group.size() < 2)
        throw DataError("leave-one-group-out needs at least 2 groups");

    LoocvReport report;
    for (const auto& [group, held_out] : by_group) {
        std::vector<DecisionExample> train;
        train.reserve(examples.size() - held_out.size());
        for (std::size_t i = 0; i < examples.size(); ++i)
            if (examples[i].group != group) train.push_back(examples[i]);
        TrainedDecisionModel fitted = train_decision_model(train);
        for (std::size_t i : held_out) {
            bool predicted = fitted.model.recommend(examples[i].features);
            if (predicted == examples[i].augmentation_helped) ++report.correct;
            ++report.total;
        }
        report.groups.push_back(group);
    }
    report.accuracy = report.total == 0
                          ? 0.0
                          : static_cast<double>(report.correct) /
                                static_cast<double>(report.total);
    return report;
}

std::vector<double> standardized_coefficients(const DecisionModel& model,
                                              const std::vector<DecisionExample>& examples) {
    if (model.coefficients.size() != 4)
        throw DataError("decision model must have exactly 4 coefficients");
    if (examples.size() < 2)
        throw DataError("standardization needs at least 2 examples");
    std::vector<double> out(4, 0.0);
    for (std::size_t j = 0; j < 4; ++j) {
        double mean = 0.0;
        for (const auto& e : examples) mean += e.features.as_vector()[j];
        mean /= static_cast<double>(examples.size());
        double ss = 0.0;
        for (const auto& e : examples) {
            double d = e.features.as_vector()[j] - mean;
            ss += d * d;
        }
        double sd = std::sqrt(ss / static_cast<double>(examples.size() - 1));
        out[j] = model.coefficients[j] * sd;
    }
    return out;
}

} // namespace augmentor
