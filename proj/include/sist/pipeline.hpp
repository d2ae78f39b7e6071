#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sist/classifier.hpp"
#include "sist/dataset.hpp"
#include "sist/distance.hpp"
#include "sist/selection.hpp"
#include "sist/transform.hpp"

namespace sist {

struct Hyperparams {
    bool delete_overlap = true;
    std::size_t shapelet_length = 3;
    int left_relax = 3;
    int right_relax = 3;
    std::size_t num_shapelets = 10;
    RelaxMode relax_mode = RelaxMode::ShiftedWindow;
    OverlapScope overlap_scope = OverlapScope::AnySeries;
    double reg_c = 1.0;
    double tol = 1e-6;
    int max_iter = 10000;
    bool standardize = false;
    std::uint64_t seed = 42;

    RelaxConfig relax() const { return {left_relax, right_relax, relax_mode}; }
    /// Throws InvalidArgument unless length >= 1, count >= 1, relax >= 0, C > 0.
    void validate() const;

    bool operator==(const Hyperparams&) const = default;
};

/// Wall-clock seconds per training stage (monotonic clock).
struct StageTimings {
    double extraction_s = 0.0;
    double scoring_s = 0.0;
    double ranking_s = 0.0;
    double transform_s = 0.0;
    double classifier_s = 0.0;
    double total_s = 0.0;

    double feature_stage_s() const { return extraction_s + scoring_s + ranking_s + transform_s; }
};

struct Provenance {
    std::string dataset_name;
    std::size_t train_size = 0;
    std::size_t series_length = 0;
    std::string builder;  // git describe of the building checkout
    std::size_t candidates_examined = 0;
    double training_accuracy = 0.0;
    StageTimings timings;
};

struct SistModel {
    ShapeletSet basis;  // distance rows are not persisted
    LinearModel linear;
    Hyperparams hyperparams;
    Provenance provenance;

    std::vector<Shapelet> shapelets() const { return basis_shapelets(basis); }
};

struct EvalReport {
    double accuracy = 0.0;
    std::size_t n_test = 0;
    /// confusion[t][p]: t, p are 0 for the negative tag and 1 for the positive.
    std::array<std::array<std::size_t, 2>, 2> confusion{};
    LabelMap label_map;
    double train_time_s = 0.0;
    double transform_time_s = 0.0;
    double predict_time_s = 0.0;
};

/// Train the classifier: extract length-L windows, score each by GRQ over
/// relaxed fixed distances, keep the top N (with optional overlap deletion),
/// reuse the cached rows as the training features and fit the linear model.
/// Throws CandidateStarvation when nothing survives selection.
SistModel train_sist(const ValidatedDataset& d, const Hyperparams& hp,
                     std::string_view dataset_name = {}, unsigned threads = 1);

/// Transforms `test` through the stored basis and relaxation, then predicts.
/// Labels are mapped through the model's label map (UnknownClass for others).
EvalReport evaluate(const SistModel& model, const LabeledDataset& test, unsigned threads = 1);

std::vector<int> predict(const SistModel& model, const LabeledDataset& data,
                         unsigned threads = 1);

/// Cartesian lattice of hyperparameters. With `joint_relax` only cells with
/// left == right are visited.
struct HyperGrid {
    std::vector<bool> delete_overlap{true, false};
    std::vector<std::size_t> lengths{3, 4};
    std::vector<int> left{3, 4};
    std::vector<int> right{3, 4};
    std::vector<std::size_t> counts{10, 50, 100, 250, 500, 750, 1000, 1250, 1500, 2000};
    bool joint_relax = false;
    Hyperparams base;  // everything the lattice does not vary

    static HyperGrid full() { return {}; }
    std::vector<Hyperparams> cells() const;
};

struct CvCell {
    Hyperparams hp;
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
};

struct GridResult {
    Hyperparams best;
    std::vector<CvCell> table;  // in enumeration order of the input cells
};

/// True when `a` should win over `b` at equal mean accuracy: smaller N,
/// smaller L, overlap deletion on, smaller l+r, smaller l.
bool preferred_on_tie(const Hyperparams& a, const Hyperparams& b);

/// Stratified k-fold CV for every cell; the winner maximises mean accuracy
/// with ties resolved by preferred_on_tie, so the winner does not depend on
/// cell order. Scoring is shared between cells that agree on (L, l, r).
GridResult grid_search_cv(const ValidatedDataset& d, std::span<const Hyperparams> cells,
                          int folds = 10, std::uint64_t seed = 42, unsigned threads = 1);

/// Model persistence: versioned JSON text, doubles written in shortest
/// round-trip decimal form. `with_timings` = false zeroes wall-clock fields
/// so repeated runs produce byte-identical files.
inline constexpr int kModelSchemaVersion = 1;
std::string save_model(const SistModel& model, bool with_timings = true);
SistModel load_model(std::string_view text);

std::string hyperparams_to_json(const Hyperparams& hp);
/// One row per cell: delete_overlap,shapelet_length,left_relax,right_relax,
/// num_shapelets,mean_accuracy,fold_1..fold_k.
std::string cv_table_csv(const GridResult& g);

std::string eval_report_json(const EvalReport& r);
std::string eval_report_csv_header();
std::string eval_report_csv_row(const EvalReport& r, std::string_view dataset_name);

/// Build identifier baked in at configure time.
const char* builder_version() noexcept;

}  // namespace sist
