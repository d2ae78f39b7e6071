#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include <json.hpp>

#include "sist/oracle.hpp"
#include "support.hpp"

using namespace sist;
using sist::testing::error_of;
using sist::testing::Rng;
using sist::testing::uniform_index;
using sist::testing::uniform_vector;

namespace {

double entropy_bits(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// Every split point "dist < t" over all distinct midpoints, by direct counting.
double exhaustive_gain(const std::vector<double>& d, const std::vector<int>& y) {
    std::vector<double> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const double n = static_cast<double>(d.size());
    double pos = 0;
    for (int v : y) pos += v > 0;
    const double parent = entropy_bits(pos / n);
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        const double t = (sorted[k] + sorted[k + 1]) / 2;
        double ln = 0, lp = 0, rn = 0, rp = 0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d[i] < t) (y[i] > 0 ? lp : ln) += 1;
            else (y[i] > 0 ? rp : rn) += 1;
        }
        const double l = ln + lp, r = rn + rp;
        const double child = l / n * entropy_bits(lp / l) + r / n * entropy_bits(rp / r);
        best = std::max(best, parent - child);
    }
    return best;
}

}  // namespace

TEST_CASE("information_gain examples") {
    const std::vector<double> d{0, 0, 1, 1};
    const std::vector<int> y{-1, -1, +1, +1};
    const auto perfect = information_gain(d, y);
    CHECK(perfect.gain == doctest::Approx(1.0));
    CHECK(perfect.threshold == 0.5);

    const std::vector<double> flat{2, 2, 2, 2};
    CHECK(information_gain(flat, y).gain == 0.0);

    const std::vector<double> d2{0, 1, 2, 3};
    const std::vector<int> y2{-1, +1, -1, +1};
    CHECK(information_gain(d2, y2).gain == doctest::Approx(exhaustive_gain(d2, y2)).epsilon(1e-12));

    CHECK(error_of([&] { information_gain(d, std::vector<int>{1, 1, 1, 1}); }) == ErrorCode::SingleClass);
    CHECK(error_of([&] { information_gain(d, std::vector<int>{1, -1}); }) == ErrorCode::LengthMismatch);
    CHECK(label_entropy(y) == doctest::Approx(1.0));
}

TEST_CASE("information_gain matches exhaustive enumeration and its bounds") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = uniform_index(rng, 2, 25);
        std::vector<double> d(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = static_cast<double>(uniform_index(rng, 0, 8));  // repeated values on purpose
            y[i] = uniform_index(rng, 0, 1) ? 1 : -1;
        }
        y[0] = 1;
        y[1] = -1;
        const auto ig = information_gain(d, y);
        CHECK(ig.gain == doctest::Approx(exhaustive_gain(d, y)).epsilon(1e-12));
        CHECK(ig.gain >= 0.0);
        CHECK(ig.gain <= label_entropy(y) + 1e-12);

        // Strictly increasing transform: same gain.
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(0.3 * d[i]) + 5.0;
        CHECK(information_gain(t, y).gain == doctest::Approx(ig.gain).epsilon(1e-12));

        // Full entropy exactly when some threshold separates the classes.
        double max_neg = -1e9, min_pos = 1e9, max_pos = -1e9, min_neg = 1e9;
        for (std::size_t i = 0; i < n; ++i) {
            if (y[i] > 0) {
                min_pos = std::min(min_pos, d[i]);
                max_pos = std::max(max_pos, d[i]);
            } else {
                min_neg = std::min(min_neg, d[i]);
                max_neg = std::max(max_neg, d[i]);
            }
        }
        const bool separable = max_neg < min_pos || max_pos < min_neg;
        CHECK(separable == (std::fabs(ig.gain - label_entropy(y)) < 1e-12));
    }
}

TEST_CASE("oracle candidate counts") {
    CHECK(oracle_candidate_count(10, 50, 1, 0) == 12750);
    CHECK(oracle_candidate_count(10, 50, 1, 50) == 10 * 50 * 51 / 2);
    CHECK(oracle_candidate_count(4, 8, 3, 3) == 24);
    const auto d = validate_binary_isometric(sist::testing::random_dataset(4, 8, 1));
    CHECK(enumerate_oracle_candidates(d, 3, 3).size() == 24);
    CHECK(enumerate_oracle_candidates(d, 1, 0).size() == 4 * 8 * 9 / 2);
}

TEST_CASE("fixed-length oracle enumeration equals the SIST candidate set") {
    const auto d = validate_binary_isometric(sist::testing::random_dataset(6, 20, 2));
    for (std::size_t L : {1, 3, 7, 20}) {
        CHECK(enumerate_oracle_candidates(d, L, L) == extract_candidates(d, L));
    }
}

TEST_CASE("oracle budget guard trips before any work") {
    const auto d = validate_binary_isometric(sist::testing::random_dataset(10, 50, 3));
    OracleConfig cfg;
    cfg.candidate_budget = 12749;
    CHECK(error_of([&] { brute_force_st(d, cfg); }) == ErrorCode::CandidateBudgetExceeded);
    cfg.candidate_budget = 12750;
    cfg.num_shapelets = 3;
    const auto model = brute_force_st(d, cfg);
    CHECK(model.candidates_examined == 12750);
    cfg.min_length = 5;
    cfg.max_length = 4;
    CHECK(error_of([&] { brute_force_st(d, cfg); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("oracle selects the top information gain candidates") {
    const auto d = validate_binary_isometric(sist::testing::planted_bump(12, 14, 4, 5, 3));
    OracleConfig cfg;
    cfg.min_length = 2;
    cfg.max_length = 5;
    cfg.num_shapelets = 6;
    const auto model = brute_force_st(d, cfg);
    REQUIRE(model.shapelets.size() == 6);

    // Reference ranking from the enumerated list and a direct gain computation.
    using Key = std::tuple<double, std::size_t, std::size_t, std::size_t>;
    std::vector<Key> keys;
    for (const auto& c : enumerate_oracle_candidates(d, 2, 5)) {
        std::vector<double> row;
        for (std::size_t i = 0; i < d.size(); ++i) row.push_back(sliding_min_distance(c.values, d.series(i)));
        keys.emplace_back(-information_gain(row, d.signs()).gain, c.source_index, c.offset, c.length());
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t r = 0; r < 6; ++r) {
        const auto& s = model.shapelets[r];
        CHECK(s.split.gain == doctest::Approx(-std::get<0>(keys[r])).epsilon(1e-12));
        CHECK(s.candidate.source_index == std::get<1>(keys[r]));
        CHECK(s.candidate.offset == std::get<2>(keys[r]));
        CHECK(s.candidate.length() == std::get<3>(keys[r]));
    }
    CHECK(model.features.rows == 12);
    CHECK(model.features.cols == 6);
    CHECK(model.features == shapelet_transform(d.raw().series, model.basis(), Metric::SlidingMin));
}

TEST_CASE("oracle results do not depend on threads") {
    const auto d = validate_binary_isometric(sist::testing::random_dataset(10, 16, 6));
    OracleConfig cfg;
    cfg.num_shapelets = 7;
    cfg.threads = 1;
    const auto a = brute_force_st(d, cfg);
    cfg.threads = 3;
    const auto b = brute_force_st(d, cfg);
    CHECK(a.basis() == b.basis());
    CHECK(a.linear.weights == b.linear.weights);
}

TEST_CASE("planted feature: oracle and SIST both perfect") {
    const auto train = validate_binary_isometric(sist::testing::planted_bump(20, 20, 7, 6, 4));
    const auto test = sist::testing::planted_bump(20, 20, 8, 6, 4);
    Hyperparams hp;
    hp.num_shapelets = 5;
    hp.left_relax = hp.right_relax = 1;
    OracleConfig cfg;
    cfg.num_shapelets = 5;
    const auto row = compare(train, test, hp, cfg, "bump");
    CHECK(row.acc_sist == 1.0);
    CHECK(row.acc_oracle == 1.0);
    CHECK(row.cands_sist == 20 * 18);
    CHECK(row.cands_oracle == 20 * 20 * 21 / 2);
    CHECK(row.n == 20);
    CHECK(row.m == 20);
    const std::string line = comparison_csv_row(row);
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    CHECK(comparison_csv_header() ==
          "dataset,n,m,acc_sist,acc_oracle,time_sist_s,time_oracle_s,cands_sist,cands_oracle");
}

TEST_CASE("tiny set: both pipelines complete with similar accuracy") {
    const auto train = validate_binary_isometric(sist::testing::planted_bump(8, 12, 9, 4, 3));
    const auto test = sist::testing::planted_bump(8, 12, 10, 4, 3);
    Hyperparams hp;
    hp.left_relax = hp.right_relax = 1;
    OracleConfig cfg;
    const auto row = compare(train, test, hp, cfg);
    CHECK(std::fabs(row.acc_sist - row.acc_oracle) <= 0.25);
    CHECK(row.cands_oracle == oracle_candidate_count(8, 12, 1, 12));
}

TEST_CASE("oracle is slower on a mid-size set") {
    const auto train = validate_binary_isometric(sist::testing::planted_bump(30, 40, 11, 10, 4));
    const auto test = sist::testing::planted_bump(10, 40, 12, 10, 4);
    Hyperparams hp;
    OracleConfig cfg;
    const auto row = compare(train, test, hp, cfg);
    CHECK(row.time_oracle_s > row.time_sist_s);
}

TEST_CASE("ablation accounting") {
    const auto train = validate_binary_isometric(sist::testing::planted_bump(30, 40, 13, 10, 4));
    Hyperparams hp;
    hp.num_shapelets = 20;
    OracleConfig cfg;
    const auto report = ablation_report(train, hp, cfg, true, 1, 3);
    REQUIRE(report.entries.size() == 2);
    CHECK(report.entries[0].method == "sist");
    CHECK(report.entries[1].method == "oracle");
    for (const auto& e : report.entries) {
        CHECK(e.timings.total_s > 0.0);
        CHECK(e.unattributed_share() <= 0.05);
        CHECK(e.feature_share() + e.classifier_share() == doctest::Approx(1.0).epsilon(0.05));
    }
    CHECK(report.entries[1].timings.total_s > report.entries[0].timings.total_s);
    const auto j = nlohmann::json::parse(report.to_json());
    CHECK(j.size() == 2);
    const std::string csv = report.to_csv();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(ablation_report(train, hp, cfg, false).entries.size() == 1);
    CHECK(error_of([&] { ablation_report(train, hp, cfg, false, 1, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("SIST training time grows with n") {
    Hyperparams hp;
    hp.num_shapelets = 20;
    double previous = 0.0;
    for (std::size_t n : {20, 80, 320}) {
        const auto d = validate_binary_isometric(sist::testing::planted_bump(n, 60, 14));
        const auto report = ablation_report(d, hp, {}, false, 1, 3);
        const double t = report.entries[0].timings.total_s;
        CHECK(t >= previous);
        previous = t;
    }
}

TEST_CASE("scaling curve rows") {
    const auto train = validate_binary_isometric(sist::testing::planted_bump(16, 16, 15, 4, 3));
    const auto test = sist::testing::planted_bump(8, 16, 16, 4, 3);
    Hyperparams hp;
    OracleConfig cfg;
    const std::vector<double> fractions{0.5, 1.0};
    const auto points = scaling_curve(train, test, hp, cfg, fractions, 1);
    REQUIRE(points.size() == 4);
    CHECK(points[0].n == 8);
    CHECK(points[2].n == 16);
    CHECK(points[1].method == "oracle");
    const std::string csv = scaling_csv(points);
    CHECK(csv.rfind("method,n,m,scale,train_time_s,accuracy\n", 0) == 0);
    const std::vector<double> bad{0.0};
    CHECK(error_of([&] { scaling_curve(train, test, hp, cfg, bad, 1); }) == ErrorCode::InvalidArgument);
}
