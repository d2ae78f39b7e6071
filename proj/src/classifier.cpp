#include "sist/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sist/error.hpp"

namespace sist {
namespace {

struct Scaling {
    std::vector<double> mean;
    std::vector<double> scale;  // 1 / sd, or 1 for constant columns
};

Scaling column_scaling(const FeatureMatrix& f) {
    Scaling s;
    s.mean.assign(f.cols, 0.0);
    s.scale.assign(f.cols, 1.0);
    for (std::size_t p = 0; p < f.cols; ++p) {
        double mean = 0.0;
        for (std::size_t i = 0; i < f.rows; ++i) mean += f.at(i, p);
        mean /= static_cast<double>(f.rows);
        double var = 0.0;
        for (std::size_t i = 0; i < f.rows; ++i) var += (f.at(i, p) - mean) * (f.at(i, p) - mean);
        const double sd = std::sqrt(var / static_cast<double>(f.rows));
        s.mean[p] = mean;
        s.scale[p] = sd > 0.0 ? 1.0 / sd : 1.0;
    }
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

}  // namespace

double LinearModel::decision(std::span<const double> features) const {
    if (features.size() != weights.size()) {
        fail(ErrorCode::DimensionMismatch, "model expects " + std::to_string(weights.size()) +
                                               " features, got " +
                                               std::to_string(features.size()));
    }
    return dot(weights, features) + bias;
}

LinearModel train_linear(const FeatureMatrix& features, std::span<const int> labels,
                         const TrainOptions& options) {
    const std::size_t n = features.rows;
    const std::size_t dim = features.cols;
    if (labels.size() != n) {
        fail(ErrorCode::DimensionMismatch, std::to_string(n) + " rows but " +
                                               std::to_string(labels.size()) + " labels");
    }
    if (!(options.reg_c > 0.0)) fail(ErrorCode::InvalidArgument, "reg_c must be positive");
    if (options.max_iter < 1) fail(ErrorCode::InvalidArgument, "max_iter must be positive");
    const bool has_neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
    const bool has_pos = std::find(labels.begin(), labels.end(), +1) != labels.end();
    for (int y : labels) {
        if (y != -1 && y != +1) fail(ErrorCode::InvalidArgument, "labels must be -1 or +1");
    }
    if (!has_neg || !has_pos) fail(ErrorCode::SingleClass, "training needs both classes");

    // Augmented rows [x, 1]; the last weight is the bias.
    const std::size_t width = dim + 1;
    Scaling scaling;
    if (options.standardize) scaling = column_scaling(features);
    std::vector<double> x(n * width);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < dim; ++p) {
            double v = features.at(i, p);
            if (options.standardize) v = (v - scaling.mean[p]) * scaling.scale[p];
            x[i * width + p] = v;
        }
        x[i * width + dim] = 1.0;
    }
    auto row = [&](std::size_t i) { return std::span<const double>(x).subspan(i * width, width); };

    const double c = options.reg_c;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(width, 0.0);
    std::vector<double> qd(n);
    for (std::size_t i = 0; i < n; ++i) qd[i] = dot(row(i), row(i));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::size_t active = n;
    constexpr double inf = std::numeric_limits<double>::infinity();
    double pg_max_old = inf;
    double pg_min_old = -inf;

    TrainMeta meta;
    meta.seed = options.seed;
    int epoch = 0;
    while (epoch < options.max_iter) {
        deterministic_shuffle(std::span(order).first(active),
                              options.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(epoch));
        double pg_max = -inf;
        double pg_min = inf;
        for (std::size_t s = 0; s < active; ++s) {
            const std::size_t i = order[s];
            const double y = labels[i];
            const auto xi = row(i);
            const double g = y * dot(w, xi) - 1.0;

            // Shrinking: bounded variables whose gradient points out of the
            // box leave the active set until the final sweep.
            double pg = 0.0;
            if (alpha[i] == 0.0) {
                if (g > pg_max_old) {
                    --active;
                    std::swap(order[s], order[active]);
                    --s;
                    continue;
                }
                pg = std::min(g, 0.0);
            } else if (alpha[i] == c) {
                if (g < pg_min_old) {
                    --active;
                    std::swap(order[s], order[active]);
                    --s;
                    continue;
                }
                pg = std::max(g, 0.0);
            } else {
                pg = g;
            }
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);

            if (std::abs(pg) > 1e-12) {
                const double old = alpha[i];
                alpha[i] = std::min(std::max(old - g / qd[i], 0.0), c);
                const double delta = (alpha[i] - old) * y;
                for (std::size_t p = 0; p < width; ++p) w[p] += delta * xi[p];
            }
        }
        ++epoch;

        double dual = 0.5 * dot(w, w);
        for (double a : alpha) dual -= a;
        meta.dual_objective.push_back(dual);

        if (pg_max - pg_min <= options.tol) {
            if (active == n) {
                meta.converged = true;
                break;
            }
            // Re-check the full set before declaring convergence.
            active = n;
            pg_max_old = inf;
            pg_min_old = -inf;
            continue;
        }
        pg_max_old = pg_max <= 0.0 ? inf : pg_max;
        pg_min_old = pg_min >= 0.0 ? -inf : pg_min;
    }
    meta.iterations = epoch;

    double hinge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        hinge += std::max(0.0, 1.0 - labels[i] * dot(w, row(i)));
    }
    meta.final_objective = 0.5 * dot(w, w) + c * hinge;

    LinearModel model;
    model.reg_c = c;
    model.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(dim));
    model.bias = w[dim];
    if (options.standardize) {
        for (std::size_t p = 0; p < dim; ++p) {
            model.weights[p] *= scaling.scale[p];
            model.bias -= model.weights[p] * scaling.mean[p];
        }
    }
    model.meta = std::move(meta);
    return model;
}

std::vector<int> predict(const LinearModel& model, const FeatureMatrix& features) {
    if (features.cols != model.weights.size()) {
        fail(ErrorCode::DimensionMismatch, "model expects " +
                                               std::to_string(model.weights.size()) +
                                               " features, got " + std::to_string(features.cols));
    }
    std::vector<int> out(features.rows);
    for (std::size_t i = 0; i < features.rows; ++i) out[i] = model.predict_sign(features.row(i));
    return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) {
        fail(ErrorCode::LengthMismatch, std::to_string(predicted.size()) + " predictions for " +
                                            std::to_string(truth.size()) + " labels");
    }
    if (truth.empty()) fail(ErrorCode::EmptyInput, "no labels to score");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace sist
