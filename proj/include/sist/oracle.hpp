#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sist/classifier.hpp"
#include "sist/dataset.hpp"
#include "sist/pipeline.hpp"
#include "sist/selection.hpp"
#include "sist/transform.hpp"

namespace sist {

// Classic shapelet transform, kept deliberately brute force: every
// subsequence of every admissible length, sliding-min distances, and
// information-gain ranking. Used as the correctness and timing baseline.

struct InfoGain {
    double gain = 0.0;       // bits
    double threshold = 0.0;  // split: dist < threshold vs dist >= threshold
};

/// Entropy (bits) of a +-1 label vector.
double label_entropy(std::span<const int> labels);

/// Best single-threshold split over midpoints of consecutive distinct sorted
/// distances; ties go to the smaller threshold. With no split available
/// (all distances equal) the gain is 0 and the threshold is that distance.
InfoGain information_gain(std::span<const double> dists, std::span<const int> labels);

struct OracleConfig {
    std::size_t min_length = 1;
    std::size_t max_length = 0;  // 0 means the series length
    std::size_t num_shapelets = 10;
    std::uint64_t candidate_budget = 2'000'000;
    TrainOptions classifier;
    unsigned threads = 1;
};

struct IgScoredCandidate {
    Shapelet candidate;
    InfoGain split;
    std::vector<double> dist_row;  // sliding-min distance to each training series
};

struct OracleModel {
    std::vector<IgScoredCandidate> shapelets;  // descending information gain
    FeatureMatrix features;                    // training transform (SlidingMin)
    LinearModel linear;
    std::size_t candidates_examined = 0;
    double training_accuracy = 0.0;
    StageTimings timings;
    std::size_t series_length = 0;

    std::vector<int> predict(const LabeledDataset& data, unsigned threads = 1) const;
    std::vector<Shapelet> basis() const;
};

/// n * sum over L in [min_length, max_length] of (m - L + 1).
std::uint64_t oracle_candidate_count(std::size_t n, std::size_t m, std::size_t min_length,
                                     std::size_t max_length);

/// Every candidate the oracle would examine, in (source, length, offset)
/// order. Only for small inputs; brute_force_st never materialises this list.
std::vector<Shapelet> enumerate_oracle_candidates(const ValidatedDataset& d,
                                                  std::size_t min_length,
                                                  std::size_t max_length);

/// Throws CandidateBudgetExceeded before doing any work if the candidate
/// count is above the configured budget.
OracleModel brute_force_st(const ValidatedDataset& d, const OracleConfig& cfg);

struct ComparisonRow {
    std::string dataset;
    std::size_t n = 0;
    std::size_t m = 0;
    double acc_sist = 0.0;
    double acc_oracle = 0.0;
    double time_sist_s = 0.0;
    double time_oracle_s = 0.0;
    std::uint64_t cands_sist = 0;
    std::uint64_t cands_oracle = 0;
    StageTimings sist_timings;
    StageTimings oracle_timings;
};

/// Trains both pipelines on `train` (serially, same thread budget) and scores
/// them on `test`.
ComparisonRow compare(const ValidatedDataset& train, const LabeledDataset& test,
                      const Hyperparams& hp, const OracleConfig& oracle,
                      std::string_view dataset_name = {}, unsigned threads = 1);

/// `dataset,n,m,acc_sist,acc_oracle,time_sist_s,time_oracle_s,cands_sist,cands_oracle`
std::string comparison_csv_header();
std::string comparison_csv_row(const ComparisonRow& row);

/// Training time split into the feature period (extraction, scoring,
/// ranking, transform) and the classifier period, for SIST and the oracle.
struct AblationEntry {
    std::string method;
    StageTimings timings;
    double feature_share() const;
    double classifier_share() const;
    /// |feature + classifier - total| / total.
    double unattributed_share() const;
};

struct AblationReport {
    std::vector<AblationEntry> entries;
    std::string to_json() const;
    std::string to_csv() const;
};

/// With `include_oracle` false only the SIST entry is produced. Each stage
/// time is the median over `repeats` runs (run serially).
AblationReport ablation_report(const ValidatedDataset& train, const Hyperparams& hp,
                               const OracleConfig& oracle, bool include_oracle = true,
                               unsigned threads = 1, int repeats = 1);

/// (method, n, m, n*m, train seconds, test accuracy) for stratified prefixes
/// of the training set; plot-ready.
struct ScalingPoint {
    std::string method;
    std::size_t n = 0;
    std::size_t m = 0;
    double train_time_s = 0.0;
    double accuracy = 0.0;
};

std::vector<ScalingPoint> scaling_curve(const ValidatedDataset& train, const LabeledDataset& test,
                                        const Hyperparams& hp, const OracleConfig& oracle,
                                        std::span<const double> fractions, std::uint64_t seed,
                                        unsigned threads = 1);

std::string scaling_csv(std::span<const ScalingPoint> points);

}  // namespace sist
