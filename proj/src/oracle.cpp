#include "sist/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "parallel.hpp"
#include "sist/error.hpp"
#include "stopwatch.hpp"

namespace sist {
namespace {

double entropy_of(std::size_t neg, std::size_t pos) {
    const double total = static_cast<double>(neg + pos);
    double h = 0.0;
    for (std::size_t c : {neg, pos}) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

bool better_ig(const IgScoredCandidate& a, const IgScoredCandidate& b) {
    if (a.split.gain != b.split.gain) return a.split.gain > b.split.gain;
    if (a.candidate.source_index != b.candidate.source_index) {
        return a.candidate.source_index < b.candidate.source_index;
    }
    if (a.candidate.offset != b.candidate.offset) return a.candidate.offset < b.candidate.offset;
    return a.candidate.length() < b.candidate.length();
}

std::size_t resolve_max(std::size_t max_length, std::size_t m) {
    return max_length == 0 ? m : max_length;
}

}  // namespace

double label_entropy(std::span<const int> labels) {
    std::size_t pos = 0;
    for (int y : labels) pos += y > 0 ? 1 : 0;
    return entropy_of(labels.size() - pos, pos);
}

InfoGain information_gain(std::span<const double> dists, std::span<const int> labels) {
    if (dists.size() != labels.size()) fail(ErrorCode::LengthMismatch, "one label per distance");
    if (dists.empty()) fail(ErrorCode::EmptyInput, "no distances");
    std::vector<std::size_t> order(dists.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dists[a] < dists[b] || (dists[a] == dists[b] && a < b);
    });

    std::size_t total_pos = 0;
    for (int y : labels) total_pos += y > 0 ? 1 : 0;
    const std::size_t total_neg = labels.size() - total_pos;
    if (total_pos == 0 || total_neg == 0) fail(ErrorCode::SingleClass, "both classes required");
    const double parent = entropy_of(total_neg, total_pos);
    const double n = static_cast<double>(labels.size());

    InfoGain best{0.0, dists[order.front()]};
    bool found = false;
    std::size_t left_pos = 0;
    std::size_t left_neg = 0;
    for (std::size_t r = 0; r + 1 < order.size(); ++r) {
        (labels[order[r]] > 0 ? left_pos : left_neg) += 1;
        const double here = dists[order[r]];
        const double next = dists[order[r + 1]];
        if (here == next) continue;
        const std::size_t left = r + 1;
        const double weighted =
            (static_cast<double>(left) / n) * entropy_of(left_neg, left_pos) +
            (static_cast<double>(labels.size() - left) / n) *
                entropy_of(total_neg - left_neg, total_pos - left_pos);
        const double gain = std::max(0.0, parent - weighted);
        if (!found || gain > best.gain) {
            best = {gain, here + (next - here) / 2.0};
            found = true;
        }
    }
    return best;
}

std::uint64_t oracle_candidate_count(std::size_t n, std::size_t m, std::size_t min_length,
                                     std::size_t max_length) {
    max_length = resolve_max(max_length, m);
    std::uint64_t per_series = 0;
    for (std::size_t len = min_length; len <= max_length && len <= m; ++len) {
        per_series += m - len + 1;
    }
    return per_series * n;
}

std::vector<Shapelet> enumerate_oracle_candidates(const ValidatedDataset& d,
                                                  std::size_t min_length,
                                                  std::size_t max_length) {
    const std::size_t m = d.length();
    max_length = resolve_max(max_length, m);
    std::vector<Shapelet> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t len = min_length; len <= max_length; ++len) {
            for (std::size_t start = 0; start + len <= m; ++start) {
                auto w = d.series(i).subspan(start, len);
                out.push_back({{w.begin(), w.end()}, i, start, d.sign(i)});
            }
        }
    }
    return out;
}

OracleModel brute_force_st(const ValidatedDataset& d, const OracleConfig& cfg) {
    const std::size_t n = d.size();
    const std::size_t m = d.length();
    const std::size_t max_length = resolve_max(cfg.max_length, m);
    if (cfg.min_length < 1 || cfg.min_length > max_length || max_length > m) {
        fail(ErrorCode::InvalidArgument, "oracle lengths must satisfy 1 <= min <= max <= m");
    }
    if (cfg.num_shapelets < 1) fail(ErrorCode::InvalidArgument, "shapelet number must be >= 1");
    const std::uint64_t total = oracle_candidate_count(n, m, cfg.min_length, max_length);
    if (total > cfg.candidate_budget) {
        fail(ErrorCode::CandidateBudgetExceeded,
             std::to_string(total) + " candidates exceed the budget of " +
                 std::to_string(cfg.candidate_budget) +
                 "; narrow the length range or raise the budget");
    }

    detail::Stopwatch clock;
    detail::Stopwatch stage;
    OracleModel model;
    model.series_length = m;
    model.candidates_examined = static_cast<std::size_t>(total);
    const std::size_t keep = cfg.num_shapelets;
    const unsigned threads = detail::resolve_threads(cfg.threads);

    // Each block keeps its own bounded heap (worst entry on top); the merge is
    // a sort under the same total order, so the winner set is schedule-free.
    std::vector<std::vector<IgScoredCandidate>> partial;
    std::mutex partial_mutex;
    detail::parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<IgScoredCandidate> heap;
        std::vector<double> row(n);
        for (std::size_t i = begin; i < end; ++i) {
            const auto x = d.series(i);
            for (std::size_t len = cfg.min_length; len <= max_length; ++len) {
                for (std::size_t start = 0; start + len <= m; ++start) {
                    const auto s = x.subspan(start, len);
                    for (std::size_t t = 0; t < n; ++t) row[t] = sliding_min_distance(s, d.series(t));
                    IgScoredCandidate sc;
                    sc.split = information_gain(row, d.signs());
                    sc.candidate = {{s.begin(), s.end()}, i, start, d.sign(i)};
                    if (heap.size() == keep) {
                        if (!better_ig(sc, heap.front())) continue;
                        std::pop_heap(heap.begin(), heap.end(), better_ig);
                        heap.pop_back();
                    }
                    sc.dist_row = row;
                    heap.push_back(std::move(sc));
                    std::push_heap(heap.begin(), heap.end(), better_ig);
                }
            }
        }
        std::lock_guard lock(partial_mutex);
        partial.push_back(std::move(heap));
    });
    model.timings.scoring_s = stage.lap();

    for (auto& h : partial) {
        for (auto& sc : h) model.shapelets.push_back(std::move(sc));
    }
    std::sort(model.shapelets.begin(), model.shapelets.end(), better_ig);
    if (model.shapelets.size() > keep) model.shapelets.resize(keep);
    model.timings.ranking_s = stage.lap();
    if (model.shapelets.empty()) fail(ErrorCode::CandidateStarvation, "no oracle shapelet");

    FeatureMatrix& f = model.features;
    f.rows = n;
    f.cols = model.shapelets.size();
    f.data.assign(f.rows * f.cols, 0.0);
    for (std::size_t p = 0; p < f.cols; ++p) {
        f.refs.push_back(model.shapelets[p].candidate.placement());
        for (std::size_t i = 0; i < n; ++i) f.at(i, p) = model.shapelets[p].dist_row[i];
    }
    model.timings.transform_s = stage.lap();

    model.linear = train_linear(f, d.signs(), cfg.classifier);
    model.linear.label_map = d.label_map();
    model.timings.classifier_s = stage.lap();
    model.training_accuracy = accuracy(sist::predict(model.linear, f), d.signs());
    model.timings.total_s = clock.elapsed();
    return model;
}

std::vector<Shapelet> OracleModel::basis() const {
    std::vector<Shapelet> out;
    out.reserve(shapelets.size());
    for (const auto& s : shapelets) out.push_back(s.candidate);
    return out;
}

std::vector<int> OracleModel::predict(const LabeledDataset& data, unsigned threads) const {
    const auto b = basis();
    const auto f = shapelet_transform(data.series, b, Metric::SlidingMin, {}, threads);
    return sist::predict(linear, f);
}

ComparisonRow compare(const ValidatedDataset& train, const LabeledDataset& test,
                      const Hyperparams& hp, const OracleConfig& oracle,
                      std::string_view dataset_name, unsigned threads) {
    ComparisonRow row;
    row.dataset = std::string(dataset_name);
    row.n = train.size();
    row.m = train.length();

    const SistModel model = train_sist(train, hp, dataset_name, threads);
    row.sist_timings = model.provenance.timings;
    row.time_sist_s = row.sist_timings.total_s;
    row.cands_sist = model.provenance.candidates_examined;
    row.acc_sist = evaluate(model, test, threads).accuracy;

    OracleConfig cfg = oracle;
    cfg.threads = threads;
    const OracleModel baseline = brute_force_st(train, cfg);
    row.oracle_timings = baseline.timings;
    row.time_oracle_s = baseline.timings.total_s;
    row.cands_oracle = baseline.candidates_examined;
    const ValidatedDataset labeled = with_label_map(test, train.label_map());
    row.acc_oracle = accuracy(baseline.predict(test, threads), labeled.signs());
    return row;
}

std::string comparison_csv_header() {
    return "dataset,n,m,acc_sist,acc_oracle,time_sist_s,time_oracle_s,cands_sist,cands_oracle";
}

std::string comparison_csv_row(const ComparisonRow& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.dataset << ',' << r.n << ',' << r.m << ',' << r.acc_sist << ',' << r.acc_oracle << ','
        << r.time_sist_s << ',' << r.time_oracle_s << ',' << r.cands_sist << ','
        << r.cands_oracle;
    return out.str();
}

double AblationEntry::feature_share() const {
    return timings.total_s > 0.0 ? timings.feature_stage_s() / timings.total_s : 0.0;
}

double AblationEntry::classifier_share() const {
    return timings.total_s > 0.0 ? timings.classifier_s / timings.total_s : 0.0;
}

double AblationEntry::unattributed_share() const {
    if (timings.total_s <= 0.0) return 0.0;
    return std::abs(timings.feature_stage_s() + timings.classifier_s - timings.total_s) /
           timings.total_s;
}

std::string AblationReport::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        j.push_back({{"method", e.method},
                     {"extraction_s", e.timings.extraction_s},
                     {"scoring_s", e.timings.scoring_s},
                     {"ranking_s", e.timings.ranking_s},
                     {"transform_s", e.timings.transform_s},
                     {"classifier_s", e.timings.classifier_s},
                     {"total_s", e.timings.total_s},
                     {"feature_share", e.feature_share()},
                     {"classifier_share", e.classifier_share()}});
    }
    return j.dump(2) + "\n";
}

std::string AblationReport::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "method,feature_stage_s,classifier_s,total_s,feature_share,classifier_share\n";
    for (const auto& e : entries) {
        out << e.method << ',' << e.timings.feature_stage_s() << ',' << e.timings.classifier_s
            << ',' << e.timings.total_s << ',' << e.feature_share() << ','
            << e.classifier_share() << '\n';
    }
    return out.str();
}

static StageTimings median_timings(std::vector<StageTimings> runs) {
    auto median_of = [&](double StageTimings::*field) {
        std::vector<double> v;
        for (const auto& r : runs) v.push_back(r.*field);
        std::sort(v.begin(), v.end());
        const std::size_t mid = v.size() / 2;
        return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
    };
    StageTimings t;
    for (auto field : {&StageTimings::extraction_s, &StageTimings::scoring_s,
                       &StageTimings::ranking_s, &StageTimings::transform_s,
                       &StageTimings::classifier_s, &StageTimings::total_s}) {
        t.*field = median_of(field);
    }
    return t;
}

AblationReport ablation_report(const ValidatedDataset& train, const Hyperparams& hp,
                               const OracleConfig& oracle, bool include_oracle,
                               unsigned threads, int repeats) {
    if (repeats < 1) fail(ErrorCode::InvalidArgument, "repeats must be >= 1");
    AblationReport report;
    std::vector<StageTimings> runs;
    for (int r = 0; r < repeats; ++r) runs.push_back(train_sist(train, hp, {}, threads).provenance.timings);
    report.entries.push_back({"sist", median_timings(runs)});
    if (include_oracle) {
        OracleConfig cfg = oracle;
        cfg.threads = threads;
        runs.clear();
        for (int r = 0; r < repeats; ++r) runs.push_back(brute_force_st(train, cfg).timings);
        report.entries.push_back({"oracle", median_timings(runs)});
    }
    return report;
}

std::vector<ScalingPoint> scaling_curve(const ValidatedDataset& train, const LabeledDataset& test,
                                        const Hyperparams& hp, const OracleConfig& oracle,
                                        std::span<const double> fractions, std::uint64_t seed,
                                        unsigned threads) {
    std::vector<std::size_t> neg, pos;
    for (std::size_t i = 0; i < train.size(); ++i) (train.sign(i) < 0 ? neg : pos).push_back(i);
    deterministic_shuffle(neg, seed);
    deterministic_shuffle(pos, seed + 1);

    std::vector<ScalingPoint> out;
    for (double f : fractions) {
        if (!(f > 0.0 && f <= 1.0)) fail(ErrorCode::InvalidArgument, "fractions lie in (0, 1]");
        auto take = [f](std::size_t count) {
            return std::min(count, std::max<std::size_t>(
                                       2, static_cast<std::size_t>(std::ceil(f * count))));
        };
        std::vector<std::size_t> idx(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(take(neg.size())));
        idx.insert(idx.end(), pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(take(pos.size())));
        std::sort(idx.begin(), idx.end());
        const ValidatedDataset part = train.subset(idx);
        const ComparisonRow row = compare(part, test, hp, oracle, {}, threads);
        out.push_back({"sist", row.n, row.m, row.time_sist_s, row.acc_sist});
        out.push_back({"oracle", row.n, row.m, row.time_oracle_s, row.acc_oracle});
    }
    return out;
}

std::string scaling_csv(std::span<const ScalingPoint> points) {
    std::ostringstream out;
    out.precision(17);
    out << "method,n,m,scale,train_time_s,accuracy\n";
    for (const auto& p : points) {
        out << p.method << ',' << p.n << ',' << p.m << ',' << p.n * p.m << ',' << p.train_time_s
            << ',' << p.accuracy << '\n';
    }
    return out.str();
}

}  // namespace sist
