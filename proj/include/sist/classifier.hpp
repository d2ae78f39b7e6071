#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sist/dataset.hpp"
#include "sist/transform.hpp"

namespace sist {

struct TrainOptions {
    double reg_c = 1.0;
    double tol = 1e-6;
    int max_iter = 10000;  // epochs over the training rows
    std::uint64_t seed = 42;
    bool standardize = false;
};

struct TrainMeta {
    int iterations = 0;
    bool converged = false;
    double final_objective = 0.0;  // primal: 0.5|w|^2 + C * sum(hinge)
    std::uint64_t seed = 0;
    /// Dual objective 0.5 a'Qa - sum(a) after each epoch; non-increasing.
    std::vector<double> dual_objective;
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    double reg_c = 1.0;
    LabelMap label_map{"-1", "+1"};
    TrainMeta meta;

    double decision(std::span<const double> features) const;
    /// +1 when the decision value is >= 0, so points on the hyperplane are +1.
    int predict_sign(std::span<const double> features) const {
        return decision(features) >= 0.0 ? +1 : -1;
    }
};

/// L1-loss (hinge) soft-margin SVM fitted by dual coordinate descent. The
/// bias is learned as the weight of a constant unit feature, so it shares the
/// L2 penalty. Rows are visited in a seeded permutation that is redrawn every
/// epoch; given the same inputs and seed the result is bit-identical.
/// With `standardize`, columns are z-scored for fitting and the scaling is
/// folded back into the returned weights and bias.
LinearModel train_linear(const FeatureMatrix& features, std::span<const int> labels,
                         const TrainOptions& options = {});

/// Canonical signs (-1/+1) per row.
std::vector<int> predict(const LinearModel& model, const FeatureMatrix& features);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

}  // namespace sist
