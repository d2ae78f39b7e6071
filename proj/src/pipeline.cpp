#include "sist/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <tuple>

#include "sist/error.hpp"
#include "stopwatch.hpp"

#ifndef SIST_BUILDER
#define SIST_BUILDER "unknown"
#endif

namespace sist {
namespace {

TrainOptions train_options(const Hyperparams& hp) {
    return {hp.reg_c, hp.tol, hp.max_iter, hp.seed, hp.standardize};
}

std::size_t confusion_index(int sign) { return sign < 0 ? 0 : 1; }

}  // namespace

const char* builder_version() noexcept { return SIST_BUILDER; }

void Hyperparams::validate() const {
    if (shapelet_length < 1) fail(ErrorCode::InvalidArgument, "shapelet length must be >= 1");
    if (num_shapelets < 1) fail(ErrorCode::InvalidArgument, "shapelet number must be >= 1");
    if (left_relax < 0 || right_relax < 0) {
        fail(ErrorCode::InvalidArgument, "relaxation factors must be >= 0");
    }
    if (!(reg_c > 0.0)) fail(ErrorCode::InvalidArgument, "reg_c must be positive");
    if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
    if (max_iter < 1) fail(ErrorCode::InvalidArgument, "max_iter must be positive");
}

SistModel train_sist(const ValidatedDataset& d, const Hyperparams& hp,
                     std::string_view dataset_name, unsigned threads) {
    hp.validate();
    if (hp.shapelet_length > d.length()) {
        fail(ErrorCode::LengthTooLarge, "shapelet length " + std::to_string(hp.shapelet_length) +
                                            " exceeds series length " +
                                            std::to_string(d.length()));
    }
    detail::Stopwatch total;
    SistModel model;
    model.hyperparams = hp;
    StageTimings& t = model.provenance.timings;
    const RelaxConfig cfg = hp.relax();

    detail::Stopwatch stage;
    const auto candidates = extract_candidates(d, hp.shapelet_length);
    t.extraction_s = stage.lap();

    auto scored = score_all(d, candidates, cfg, threads);
    t.scoring_s = stage.lap();

    model.basis = rank_and_select(std::move(scored), hp.num_shapelets, hp.delete_overlap,
                                  hp.overlap_scope, cfg);
    model.basis.length = hp.shapelet_length;
    t.ranking_s = stage.lap();
    if (model.basis.empty()) fail(ErrorCode::CandidateStarvation, "no shapelet survived selection");

    const FeatureMatrix features = cached_transform(model.basis, cfg);
    t.transform_s = stage.lap();

    model.linear = train_linear(features, d.signs(), train_options(hp));
    model.linear.label_map = d.label_map();
    t.classifier_s = stage.lap();

    model.provenance.training_accuracy = accuracy(predict(model.linear, features), d.signs());
    t.total_s = total.elapsed();

    model.provenance.dataset_name = std::string(dataset_name);
    model.provenance.train_size = d.size();
    model.provenance.series_length = d.length();
    model.provenance.builder = builder_version();
    model.provenance.candidates_examined = candidates.size();
    // The cached rows only describe the training set; drop them so a
    // trained model and a reloaded one are interchangeable.
    for (auto& m : model.basis.members) {
        m.dist_row.clear();
        m.dist_row.shrink_to_fit();
    }
    return model;
}

std::vector<int> predict(const SistModel& model, const LabeledDataset& data, unsigned threads) {
    if (data.length() != model.provenance.series_length) {
        fail(ErrorCode::LengthMismatch, "model was trained on length " +
                                            std::to_string(model.provenance.series_length) +
                                            ", data has length " + std::to_string(data.length()));
    }
    const auto shapelets = model.shapelets();
    const auto features = shapelet_transform(data.series, shapelets, Metric::RelaxedFixed,
                                             model.basis.config, threads);
    return predict(model.linear, features);
}

EvalReport evaluate(const SistModel& model, const LabeledDataset& test, unsigned threads) {
    if (test.size() > 0 && test.length() != model.provenance.series_length) {
        fail(ErrorCode::LengthMismatch, "model was trained on length " +
                                            std::to_string(model.provenance.series_length) +
                                            ", test set has length " + std::to_string(test.length()));
    }
    const ValidatedDataset v = with_label_map(test, model.linear.label_map);

    EvalReport report;
    report.label_map = model.linear.label_map;
    report.n_test = v.size();
    report.train_time_s = model.provenance.timings.total_s;

    detail::Stopwatch stage;
    const auto shapelets = model.shapelets();
    const auto features = shapelet_transform(v.raw().series, shapelets, Metric::RelaxedFixed,
                                             model.basis.config, threads);
    report.transform_time_s = stage.lap();
    const auto predicted = predict(model.linear, features);
    report.predict_time_s = stage.lap();

    report.accuracy = accuracy(predicted, v.signs());
    for (std::size_t i = 0; i < v.size(); ++i) {
        ++report.confusion[confusion_index(v.sign(i))][confusion_index(predicted[i])];
    }
    return report;
}

std::vector<Hyperparams> HyperGrid::cells() const {
    std::vector<Hyperparams> out;
    for (bool del : delete_overlap) {
        for (std::size_t len : lengths) {
            for (int l : left) {
                for (int r : right) {
                    if (joint_relax && l != r) continue;
                    for (std::size_t count : counts) {
                        Hyperparams hp = base;
                        hp.delete_overlap = del;
                        hp.shapelet_length = len;
                        hp.left_relax = l;
                        hp.right_relax = r;
                        hp.num_shapelets = count;
                        out.push_back(hp);
                    }
                }
            }
        }
    }
    return out;
}

bool preferred_on_tie(const Hyperparams& a, const Hyperparams& b) {
    auto key = [](const Hyperparams& h) {
        return std::make_tuple(h.num_shapelets, h.shapelet_length, h.delete_overlap ? 0 : 1,
                               h.left_relax + h.right_relax, h.left_relax,
                               static_cast<int>(h.relax_mode), static_cast<int>(h.overlap_scope),
                               h.reg_c, h.standardize ? 1 : 0);
    };
    return key(a) < key(b);
}

GridResult grid_search_cv(const ValidatedDataset& d, std::span<const Hyperparams> cells,
                          int folds, std::uint64_t seed, unsigned threads) {
    if (cells.empty()) fail(ErrorCode::InvalidArgument, "empty hyperparameter grid");
    for (const auto& hp : cells) {
        hp.validate();
        if (hp.shapelet_length > d.length()) {
            fail(ErrorCode::LengthTooLarge, "grid shapelet length exceeds series length");
        }
    }
    const FoldPlan plan = stratified_kfold(d, folds, seed);

    GridResult result;
    result.table.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        result.table[c].hp = cells[c];
        result.table[c].fold_accuracy.assign(static_cast<std::size_t>(folds), 0.0);
    }

    // Cells sharing (L, l, r, mode) see identical candidate scores on a fold.
    using ScoreKey = std::tuple<std::size_t, int, int, int>;
    std::map<ScoreKey, std::vector<std::size_t>> groups;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& hp = cells[c];
        groups[{hp.shapelet_length, hp.left_relax, hp.right_relax,
                static_cast<int>(hp.relax_mode)}]
            .push_back(c);
    }

    for (int fold = 0; fold < folds; ++fold) {
        const auto train_idx = plan.train_indices(fold);
        const auto test_idx = plan.test_indices(fold);
        const ValidatedDataset train = d.subset(train_idx);
        const ValidatedDataset test = d.subset(test_idx);

        for (const auto& [key, members] : groups) {
            const Hyperparams& first = cells[members.front()];
            const RelaxConfig cfg = first.relax();
            const auto candidates = extract_candidates(train, first.shapelet_length);
            auto scored = score_all(train, candidates, cfg, threads);
            std::sort(scored.begin(), scored.end(), higher_priority);
            std::vector<const ScoredCandidate*> ranked;
            ranked.reserve(scored.size());
            for (const auto& sc : scored) ranked.push_back(&sc);

            for (std::size_t c : members) {
                const Hyperparams& hp = cells[c];
                const auto kept =
                    select_ranked(ranked, hp.num_shapelets, hp.delete_overlap, hp.overlap_scope);
                ShapeletSet basis;
                basis.config = cfg;
                basis.length = hp.shapelet_length;
                basis.overlap_deleted = hp.delete_overlap;
                basis.scope = hp.overlap_scope;
                for (std::size_t r : kept) basis.members.push_back(*ranked[r]);

                const FeatureMatrix features = cached_transform(basis, cfg);
                const LinearModel linear = train_linear(features, train.signs(), train_options(hp));
                const auto shapelets = basis_shapelets(basis);
                const FeatureMatrix test_features = shapelet_transform(
                    test.raw().series, shapelets, Metric::RelaxedFixed, cfg, threads);
                result.table[c].fold_accuracy[static_cast<std::size_t>(fold)] =
                    accuracy(predict(linear, test_features), test.signs());
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        auto& cell = result.table[c];
        double sum = 0.0;
        for (double a : cell.fold_accuracy) sum += a;
        cell.mean_accuracy = sum / static_cast<double>(folds);
        if (c == 0) continue;
        const auto& incumbent = result.table[best];
        if (cell.mean_accuracy > incumbent.mean_accuracy ||
            (cell.mean_accuracy == incumbent.mean_accuracy &&
             preferred_on_tie(cell.hp, incumbent.hp))) {
            best = c;
        }
    }
    result.best = result.table[best].hp;
    return result;
}

}  // namespace sist
