#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sist/sist.h"

namespace {

// UCR text for two noisy classes; class 2 carries a bump at [pos, pos + 4).
std::string bump_text(std::size_t n, std::size_t m, unsigned seed, std::size_t pos = 6) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.3);
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = i % 2 == 1;
        out << (positive ? 2 : 1);
        for (std::size_t t = 0; t < m; ++t) {
            double v = g(rng);
            if (positive && t >= pos && t < pos + 4) v += 3.0;
            out << '\t' << v;
        }
        out << '\n';
    }
    return out.str();
}

struct Dataset {
    sist_dataset* p = nullptr;
    ~Dataset() { sist_dataset_free(p); }
};

struct Model {
    sist_model* p = nullptr;
    ~Model() { sist_model_free(p); }
};

struct Text {
    char* p = nullptr;
    ~Text() { sist_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

sist_status parse(const std::string& text, Dataset& d, int validate = 1) {
    return sist_dataset_parse(text.data(), text.size(), validate, 0, &d.p);
}

sist_hyperparams small_hp() {
    sist_hyperparams hp;
    sist_hyperparams_default(&hp);
    hp.left_relax = hp.right_relax = 1;
    hp.num_shapelets = 5;
    return hp;
}

}  // namespace

TEST_CASE("defaults and names") {
    sist_hyperparams hp;
    sist_hyperparams_default(&hp);
    CHECK(hp.delete_overlap == 1);
    CHECK(hp.shapelet_length == 3);
    CHECK(hp.left_relax == 3);
    CHECK(hp.right_relax == 3);
    CHECK(hp.num_shapelets == 10);
    CHECK(hp.reg_c == 1.0);
    CHECK(hp.seed == 42);

    sist_grid g;
    sist_grid_full(&g);
    CHECK(g.n_delete_overlap * g.n_lengths * g.n_left_relax * g.n_right_relax * g.n_num_shapelets == 160);

    CHECK(std::string(sist_status_name(SIST_OK)) == "Ok");
    CHECK(std::string(sist_status_name(SIST_CANDIDATE_BUDGET_EXCEEDED)) == "CandidateBudgetExceeded");
    CHECK(std::string(sist_version()).rfind("sist-", 0) == 0);
    CHECK(std::string(sist_compare_csv_header()).rfind("dataset,n,m,", 0) == 0);
}

TEST_CASE("dataset parsing statuses") {
    Dataset ok;
    REQUIRE(parse(bump_text(10, 20, 1), ok) == SIST_OK);
    CHECK(sist_dataset_size(ok.p) == 10);
    CHECK(sist_dataset_length(ok.p) == 20);
    CHECK(std::string(sist_last_error()).empty());

    Dataset ragged;
    CHECK(parse("1\t0\t1\n2\t0\n", ragged) == SIST_RAGGED_LENGTHS);
    CHECK(ragged.p == nullptr);
    CHECK(!std::string(sist_last_error()).empty());

    Dataset three;
    CHECK(parse("1\t0\n2\t1\n3\t2\n", three) == SIST_NOT_BINARY);
    Dataset unvalidated;
    CHECK(parse("1\t0\n2\t1\n3\t2\n", unvalidated, 0) == SIST_OK);

    Dataset junk;
    CHECK(parse("1\t0\tabc\n", junk) == SIST_NON_NUMERIC_VALUE);

    Dataset missing;
    CHECK(sist_dataset_load("/nonexistent/file.tsv", 1, 0, &missing.p) == SIST_IO_ERROR);
    CHECK(sist_dataset_parse(nullptr, 0, 1, 0, &missing.p) == SIST_INVALID_ARGUMENT);
}

TEST_CASE("train, predict, evaluate") {
    Dataset train, test;
    REQUIRE(parse(bump_text(20, 20, 2), train) == SIST_OK);
    REQUIRE(parse(bump_text(10, 20, 3), test) == SIST_OK);
    const auto hp = small_hp();
    Model model;
    REQUIRE(sist_train(train.p, &hp, "bump", 1, &model.p) == SIST_OK);
    CHECK(sist_model_training_accuracy(model.p) == 1.0);
    CHECK(sist_model_num_shapelets(model.p) >= 1);
    CHECK(sist_model_num_shapelets(model.p) <= 5);

    std::vector<int> signs(10);
    REQUIRE(sist_predict(model.p, test.p, 1, signs.data(), signs.size()) == SIST_OK);
    for (std::size_t i = 0; i < signs.size(); ++i) CHECK(signs[i] == (i % 2 ? 1 : -1));
    CHECK(sist_predict(model.p, test.p, 1, signs.data(), 3) == SIST_INVALID_ARGUMENT);

    double acc = 0.0;
    Text report;
    REQUIRE(sist_evaluate(model.p, test.p, 1, &acc, &report.p) == SIST_OK);
    CHECK(acc == 1.0);
    const auto j = nlohmann::json::parse(report.str());
    CHECK(j["accuracy"] == 1.0);
    CHECK(sist_evaluate(model.p, test.p, 1, nullptr, nullptr) == SIST_OK);

    Text train_report;
    REQUIRE(sist_model_train_report(model.p, 0, &train_report.p) == SIST_OK);
    const auto t = nlohmann::json::parse(train_report.str());
    CHECK(t["dataset"] == "bump");
    CHECK(t["candidates_examined"] == 20 * 18);
    CHECK(t["timings"]["total_s"] == 0.0);

    Dataset shorter;
    REQUIRE(parse(bump_text(4, 15, 4), shorter) == SIST_OK);
    CHECK(sist_evaluate(model.p, shorter.p, 1, &acc, nullptr) == SIST_LENGTH_MISMATCH);
}

TEST_CASE("training errors surface as statuses") {
    Dataset train;
    REQUIRE(parse(bump_text(6, 8, 5, 2), train) == SIST_OK);
    auto hp = small_hp();
    Model model;
    hp.shapelet_length = 0;
    CHECK(sist_train(train.p, &hp, nullptr, 1, &model.p) == SIST_INVALID_ARGUMENT);
    hp.shapelet_length = 9;
    CHECK(sist_train(train.p, &hp, nullptr, 1, &model.p) == SIST_LENGTH_TOO_LARGE);
    hp = small_hp();
    hp.relax_mode = 7;
    CHECK(sist_train(train.p, &hp, nullptr, 1, &model.p) == SIST_INVALID_ARGUMENT);
    CHECK(model.p == nullptr);
    CHECK(sist_train(nullptr, &hp, nullptr, 1, &model.p) == SIST_INVALID_ARGUMENT);
}

TEST_CASE("model round trip through text and files") {
    Dataset train;
    REQUIRE(parse(bump_text(16, 18, 6), train) == SIST_OK);
    const auto hp = small_hp();
    Model model;
    REQUIRE(sist_train(train.p, &hp, nullptr, 1, &model.p) == SIST_OK);

    Text saved;
    REQUIRE(sist_model_save(model.p, 0, &saved.p) == SIST_OK);
    Model loaded;
    REQUIRE(sist_model_load(saved.p, std::strlen(saved.p), &loaded.p) == SIST_OK);
    Text again;
    REQUIRE(sist_model_save(loaded.p, 0, &again.p) == SIST_OK);
    CHECK(saved.str() == again.str());

    const auto path = std::filesystem::temp_directory_path() / "sist_capi_model.json";
    REQUIRE(sist_model_save_file(model.p, path.c_str(), 0) == SIST_OK);
    Model from_file;
    REQUIRE(sist_model_load_file(path.c_str(), &from_file.p) == SIST_OK);
    std::vector<int> a(16), b(16);
    REQUIRE(sist_predict(model.p, train.p, 1, a.data(), a.size()) == SIST_OK);
    REQUIRE(sist_predict(from_file.p, train.p, 1, b.data(), b.size()) == SIST_OK);
    CHECK(a == b);
    std::filesystem::remove(path);

    Model bad;
    const std::string garbage = "{not json";
    CHECK(sist_model_load(garbage.data(), garbage.size(), &bad.p) == SIST_CORRUPT_MODEL);
    auto j = nlohmann::json::parse(saved.str());
    j["version"] = 99;
    const std::string future = j.dump();
    CHECK(sist_model_load(future.data(), future.size(), &bad.p) == SIST_SCHEMA_VERSION_MISMATCH);
    CHECK(sist_model_load_file("/nonexistent/model.json", &bad.p) == SIST_IO_ERROR);
    CHECK(bad.p == nullptr);
}

TEST_CASE("grid search, compare, scaling and ablation") {
    Dataset train, test;
    REQUIRE(parse(bump_text(20, 16, 7), train) == SIST_OK);
    REQUIRE(parse(bump_text(10, 16, 8), test) == SIST_OK);

    const int dos[] = {1};
    const size_t lengths[] = {3};
    const int relax[] = {1, 2};
    const size_t counts[] = {2, 5};
    sist_grid g{};
    g.delete_overlap = dos;
    g.n_delete_overlap = 1;
    g.lengths = lengths;
    g.n_lengths = 1;
    g.left_relax = relax;
    g.n_left_relax = 2;
    g.right_relax = relax;
    g.n_right_relax = 2;
    g.num_shapelets = counts;
    g.n_num_shapelets = 2;
    sist_hyperparams_default(&g.base);
    Text best, cv;
    REQUIRE(sist_grid_search(train.p, &g, 4, 1, 1, &best.p, &cv.p) == SIST_OK);
    const std::string table = cv.str();
    CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 8);
    CHECK(nlohmann::json::parse(best.str()).contains("num_shapelets"));
    g.joint_relax = 1;
    Text joint;
    REQUIRE(sist_grid_search(train.p, &g, 4, 1, 1, nullptr, &joint.p) == SIST_OK);
    const std::string jt = joint.str();
    CHECK(std::count(jt.begin(), jt.end(), '\n') == 1 + 4);
    g.n_lengths = 0;
    CHECK(sist_grid_search(train.p, &g, 4, 1, 1, nullptr, nullptr) == SIST_INVALID_ARGUMENT);

    const auto hp = small_hp();
    sist_oracle_config oc;
    sist_oracle_config_default(&oc);
    Text row, ablation;
    REQUIRE(sist_compare(train.p, test.p, &hp, &oc, "bump", 1, &row.p, &ablation.p) == SIST_OK);
    CHECK(row.str().rfind("bump,20,16,", 0) == 0);
    CHECK(nlohmann::json::parse(ablation.str()).size() == 2);
    oc.candidate_budget = 10;
    CHECK(sist_compare(train.p, test.p, &hp, &oc, "bump", 1, &row.p, nullptr) ==
          SIST_CANDIDATE_BUDGET_EXCEEDED);
    CHECK(std::string(sist_last_error()).find("budget") != std::string::npos);
    sist_oracle_config_default(&oc);

    const double fractions[] = {0.5, 1.0};
    Text curve;
    REQUIRE(sist_scaling_curve(train.p, test.p, &hp, &oc, fractions, 2, 1, 1, &curve.p) == SIST_OK);
    const std::string c = curve.str();
    CHECK(std::count(c.begin(), c.end(), '\n') == 5);

    Text aj, ac;
    REQUIRE(sist_ablation(train.p, &hp, &oc, 0, 1, 1, &aj.p, &ac.p) == SIST_OK);
    CHECK(nlohmann::json::parse(aj.str()).size() == 1);
    CHECK(sist_ablation(train.p, &hp, &oc, 0, 0, 1, &aj.p, nullptr) == SIST_INVALID_ARGUMENT);
}

TEST_CASE("real dataset through the C API") {
    Dataset train, test;
    REQUIRE(sist_dataset_load(SIST_DATA_DIR "/Coffee_TRAIN.tsv", 1, 0, &train.p) == SIST_OK);
    REQUIRE(sist_dataset_load(SIST_DATA_DIR "/Coffee_TEST.tsv", 1, 0, &test.p) == SIST_OK);
    CHECK(sist_dataset_size(train.p) == 28);
    CHECK(sist_dataset_length(train.p) == 286);
    sist_hyperparams hp;
    sist_hyperparams_default(&hp);
    Model model;
    REQUIRE(sist_train(train.p, &hp, "Coffee", 1, &model.p) == SIST_OK);
    double acc = 0.0;
    REQUIRE(sist_evaluate(model.p, test.p, 1, &acc, nullptr) == SIST_OK);
    CHECK(acc > 0.8);
}
