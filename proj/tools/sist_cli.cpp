// sist: command-line front end over the C API.
//
//   sist train    --data X_TRAIN.tsv --length 3 --relax 3,3 --num-shapelets 10 --out x.model
//   sist evaluate --model x.model --data X_TEST.tsv --report eval.json
//   sist grid     --data X_TRAIN.tsv --grid full --folds 10 --seed 1 --out-cv cv.csv
//   sist compare  --train X_TRAIN.tsv --test X_TEST.tsv --out cmp.csv
//   sist bench    --data X_TRAIN.tsv --repeats 3 --out ablation.json
//
// Exit codes: 0 success, 1 internal failure, 2 bad flags or input data,
// 3 unusable model (evaluate), 4 oracle candidate budget exceeded.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sist/sist.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitModel = 3;
constexpr int kExitBudget = 4;

const CLI::Validator kPositive(
    [](std::string& value) -> std::string {
        try {
            if (std::stod(value) > 0.0) return {};
        } catch (const std::exception&) {
        }
        return "value must be positive, got " + value;
    },
    "POSITIVE");

struct CliFailure {
    int exit_code;
    std::string message;
};

struct DatasetDeleter {
    void operator()(sist_dataset* d) const { sist_dataset_free(d); }
};
struct ModelDeleter {
    void operator()(sist_model* m) const { sist_model_free(m); }
};
using DatasetPtr = std::unique_ptr<sist_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<sist_model, ModelDeleter>;

// Owns a string handed out by the library.
class LibString {
public:
    LibString() = default;
    LibString(const LibString&) = delete;
    LibString& operator=(const LibString&) = delete;
    ~LibString() { sist_string_free(p_); }
    char** out() { return &p_; }
    std::string str() const { return p_ ? p_ : ""; }

private:
    char* p_ = nullptr;
};

int exit_code_for(sist_status s, bool model_stage) {
    switch (s) {
        case SIST_OK: return kExitOk;
        case SIST_CANDIDATE_BUDGET_EXCEEDED: return kExitBudget;
        case SIST_SCHEMA_VERSION_MISMATCH:
        case SIST_CORRUPT_MODEL:
        case SIST_DIMENSION_MISMATCH: return kExitModel;
        case SIST_LENGTH_MISMATCH: return model_stage ? kExitModel : kExitInput;
        case SIST_INTERNAL: return kExitInternal;
        default: return kExitInput;
    }
}

void check(sist_status s, bool model_stage = false) {
    if (s == SIST_OK) return;
    throw CliFailure{exit_code_for(s, model_stage), sist_last_error()};
}

DatasetPtr load_dataset(const std::string& path, bool validate, bool znorm) {
    sist_dataset* d = nullptr;
    check(sist_dataset_load(path.c_str(), validate ? 1 : 0, znorm ? 1 : 0, &d));
    return DatasetPtr(d);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw CliFailure{kExitInput, "cannot write " + path};
}

// "Coffee_TRAIN.tsv" -> "Coffee"
std::string dataset_name(const std::string& path) {
    std::string stem = std::filesystem::path(path).stem().string();
    for (const char* suffix : {"_TRAIN", "_TEST"}) {
        const std::string s(suffix);
        if (stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0) {
            return stem.substr(0, stem.size() - s.size());
        }
    }
    return stem;
}

unsigned thread_count(unsigned flag) {
    if (const char* env = std::getenv("SIST_THREADS"); env != nullptr && *env != '\0') {
        try {
            return static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw CliFailure{kExitInput, std::string("SIST_THREADS is not a number: ") + env};
        }
    }
    return flag;
}

// --no-timestamps: every wall-clock field ("*_s") and every share derived
// from them ("*_share") becomes 0, so identical runs give identical reports.
bool is_timing_key(const std::string& k) {
    auto ends = [&](std::string_view suffix) {
        return k.size() > suffix.size() && k.compare(k.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends("_s") || ends("_share");
}

void scrub_json(nlohmann::ordered_json& j) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (is_timing_key(it.key()) && it.value().is_number()) {
                it.value() = 0.0;
            } else {
                scrub_json(it.value());
            }
        }
    } else if (j.is_array()) {
        for (auto& v : j) scrub_json(v);
    }
}

std::string scrub_json_text(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text);
    scrub_json(j);
    return j.dump(2) + "\n";
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

std::string scrub_csv_text(const std::string& header, const std::string& body) {
    const auto cols = split(header, ',');
    std::vector<bool> timed(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        timed[i] = is_timing_key(cols[i]);
    }
    std::ostringstream out;
    std::stringstream lines(body);
    std::string line;
    while (std::getline(lines, line)) {
        auto fields = split(line, ',');
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i < timed.size() && timed[i]) fields[i] = "0";
            out << (i ? "," : "") << fields[i];
        }
        out << '\n';
    }
    return out.str();
}

struct HyperFlags {
    std::size_t length = 3;
    std::vector<int> relax{3, 3};
    std::size_t num_shapelets = 10;
    bool delete_overlap = true;
    std::string relax_mode = "shifted";
    std::string overlap_scope = "any";
    double reg_c = 1.0;
    bool standardize = false;

    void attach(CLI::App* app, bool with_structure = true) {
        if (with_structure) {
            app->add_option("--length,-L", length, "shapelet length L")
                ->check(kPositive)
                ->capture_default_str();
            app->add_option("--relax", relax, "relaxation l,r")
                ->delimiter(',')
                ->expected(2)
                ->check(CLI::NonNegativeNumber)
                ->capture_default_str();
            app->add_option("--num-shapelets,-N", num_shapelets, "number of shapelets N")
                ->check(kPositive)
                ->capture_default_str();
            app->add_flag("--delete-overlap,!--no-delete-overlap", delete_overlap,
                          "drop candidates overlapping a kept shapelet")
                ->capture_default_str();
        }
        app->add_option("--relax-mode", relax_mode, "shifted or dp")
            ->check(CLI::IsMember({"shifted", "dp"}))
            ->capture_default_str();
        app->add_option("--overlap-scope", overlap_scope, "any or same")
            ->check(CLI::IsMember({"any", "same"}))
            ->capture_default_str();
        app->add_option("--reg-c", reg_c, "linear classifier regularisation C")
            ->check(kPositive)
            ->capture_default_str();
        app->add_flag("--standardize", standardize, "standardise features before the classifier");
    }

    sist_hyperparams to_c(std::uint64_t seed) const {
        sist_hyperparams hp;
        sist_hyperparams_default(&hp);
        hp.delete_overlap = delete_overlap ? 1 : 0;
        hp.shapelet_length = length;
        hp.left_relax = relax.at(0);
        hp.right_relax = relax.at(1);
        hp.num_shapelets = num_shapelets;
        hp.relax_mode = relax_mode == "dp" ? SIST_RELAX_SUBSEQUENCE_DP : SIST_RELAX_SHIFTED_WINDOW;
        hp.overlap_scope = overlap_scope == "same" ? SIST_OVERLAP_SAME_SERIES : SIST_OVERLAP_ANY_SERIES;
        hp.reg_c = reg_c;
        hp.standardize = standardize ? 1 : 0;
        hp.seed = seed;
        return hp;
    }
};

struct OracleFlags {
    sist_oracle_config cfg{};

    void attach(CLI::App* app) {
        sist_oracle_config_default(&cfg);
        app->add_option("--oracle-min-length", cfg.min_length, "shortest oracle candidate")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--oracle-max-length", cfg.max_length, "longest oracle candidate (0: m)")
            ->capture_default_str();
        app->add_option("--oracle-num-shapelets", cfg.num_shapelets, "shapelets kept by the oracle")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--oracle-budget", cfg.candidate_budget, "maximum oracle candidates")
            ->capture_default_str();
    }
};

struct Common {
    std::uint64_t seed = 42;
    unsigned threads = 0;
    bool no_timestamps = false;
    bool znorm = false;

    void attach(CLI::App* app) {
        app->add_option("--seed", seed, "random seed")->capture_default_str();
        app->add_option("--threads", threads, "worker threads (0: all cores; SIST_THREADS overrides)")
            ->capture_default_str();
        app->add_flag("--no-timestamps", no_timestamps, "zero wall-clock fields in reports");
        app->add_flag("--znorm", znorm, "z-normalise every series on load");
    }
};

int cmd_train(const std::string& data, const HyperFlags& hf, const Common& c,
              const std::string& out, std::string report_path) {
    const auto train = load_dataset(data, true, c.znorm);
    const auto hp = hf.to_c(c.seed);
    sist_model* raw = nullptr;
    check(sist_train(train.get(), &hp, dataset_name(data).c_str(), thread_count(c.threads), &raw));
    const ModelPtr model(raw);

    check(sist_model_save_file(model.get(), out.c_str(), c.no_timestamps ? 0 : 1));
    LibString report;
    check(sist_model_train_report(model.get(), c.no_timestamps ? 0 : 1, report.out()));
    if (report_path.empty()) report_path = out + ".report.json";
    write_file(report_path, report.str());

    const auto j = nlohmann::json::parse(report.str());
    std::printf("trained n=%zu m=%zu candidates=%zu shapelets=%zu train_accuracy=%.6g time=%.3fs\n",
                sist_dataset_size(train.get()), sist_dataset_length(train.get()),
                j["candidates_examined"].get<std::size_t>(), sist_model_num_shapelets(model.get()),
                sist_model_training_accuracy(model.get()), j["timings"]["total_s"].get<double>());
    return kExitOk;
}

int cmd_evaluate(const std::string& model_path, const std::string& data, const Common& c,
                 std::string report_path, const std::string& csv_path) {
    const auto started = std::chrono::steady_clock::now();
    sist_model* raw = nullptr;
    check(sist_model_load_file(model_path.c_str(), &raw), true);
    const ModelPtr model(raw);
    const auto test = load_dataset(data, false, c.znorm);

    double acc = 0.0;
    LibString report;
    check(sist_evaluate(model.get(), test.get(), thread_count(c.threads), &acc, report.out()), true);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::string json = report.str();
    if (c.no_timestamps) json = scrub_json_text(json);
    if (report_path.empty()) report_path = model_path + ".eval.json";
    write_file(report_path, json);

    if (!csv_path.empty()) {
        const auto j = nlohmann::json::parse(json);
        const auto& cm = j["confusion"];
        std::ostringstream row;
        row.precision(17);
        row << "dataset,n_test,accuracy,true_neg,false_pos,false_neg,true_pos,train_time_s,"
               "transform_time_s,predict_time_s\n"
            << dataset_name(data) << ',' << j["n_test"].get<std::size_t>() << ','
            << j["accuracy"].get<double>() << ',' << cm[0][0] << ',' << cm[0][1] << ','
            << cm[1][0] << ',' << cm[1][1] << ',' << j["train_time_s"].get<double>() << ','
            << j["transform_time_s"].get<double>() << ',' << j["predict_time_s"].get<double>()
            << '\n';
        write_file(csv_path, row.str());
    }
    std::printf("accuracy=%.6g n=%zu time=%.3fs\n", acc, sist_dataset_size(test.get()),
                c.no_timestamps ? 0.0 : elapsed);
    return kExitOk;
}

struct GridFlags {
    std::string grid = "full";
    std::vector<std::string> delete_overlap;
    std::vector<std::size_t> lengths;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<std::size_t> counts;
    bool joint_relax = false;
    int folds = 10;
    std::string out_cv = "cv_table.csv";
    std::string out_best = "best_hyperparams.json";
};

int cmd_grid(const std::string& data, const GridFlags& g, const HyperFlags& hf, const Common& c) {
    const auto train = load_dataset(data, true, c.znorm);
    sist_grid grid;
    sist_grid_full(&grid);
    grid.base = hf.to_c(c.seed);
    grid.joint_relax = g.joint_relax ? 1 : 0;

    std::vector<int> delete_overlap;
    for (const auto& v : g.delete_overlap) {
        if (v == "true" || v == "1") delete_overlap.push_back(1);
        else if (v == "false" || v == "0") delete_overlap.push_back(0);
        else throw CliFailure{kExitInput, "--delete-overlap expects true/false, got '" + v + "'"};
    }
    if (!delete_overlap.empty()) {
        grid.delete_overlap = delete_overlap.data();
        grid.n_delete_overlap = delete_overlap.size();
    }
    if (!g.lengths.empty()) {
        grid.lengths = g.lengths.data();
        grid.n_lengths = g.lengths.size();
    }
    if (!g.left.empty()) {
        grid.left_relax = g.left.data();
        grid.n_left_relax = g.left.size();
    }
    if (!g.right.empty()) {
        grid.right_relax = g.right.data();
        grid.n_right_relax = g.right.size();
    }
    if (!g.counts.empty()) {
        grid.num_shapelets = g.counts.data();
        grid.n_num_shapelets = g.counts.size();
    }

    const auto started = std::chrono::steady_clock::now();
    LibString best, cv;
    check(sist_grid_search(train.get(), &grid, g.folds, c.seed, thread_count(c.threads), best.out(),
                           cv.out()));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_file(g.out_cv, cv.str());
    write_file(g.out_best, best.str());

    const auto b = nlohmann::json::parse(best.str());
    std::size_t rows = 0;
    for (char ch : cv.str()) rows += ch == '\n';
    std::printf("best delete_overlap=%s L=%zu relax=%d,%d N=%zu cells=%zu folds=%d time=%.3fs\n",
                b["delete_overlap"].get<bool>() ? "true" : "false",
                b["shapelet_length"].get<std::size_t>(), b["left_relax"].get<int>(),
                b["right_relax"].get<int>(), b["num_shapelets"].get<std::size_t>(),
                rows ? rows - 1 : 0, g.folds, c.no_timestamps ? 0.0 : elapsed);
    return kExitOk;
}

struct CompareFlags {
    std::string train;
    std::string test;
    std::string out = "comparison.csv";
    std::string ablation = "ablation.json";
    std::string plot_data;
    std::vector<double> fractions{0.25, 0.5, 0.75, 1.0};
};

int cmd_compare(const CompareFlags& f, const HyperFlags& hf, const OracleFlags& of,
                const Common& c) {
    const auto train = load_dataset(f.train, true, c.znorm);
    const auto test = load_dataset(f.test, false, c.znorm);
    const auto hp = hf.to_c(c.seed);
    const unsigned threads = thread_count(c.threads);

    LibString row, ablation;
    check(sist_compare(train.get(), test.get(), &hp, &of.cfg, dataset_name(f.train).c_str(),
                       threads, row.out(), ablation.out()));
    const std::string header = sist_compare_csv_header();
    std::string body = row.str() + "\n";
    std::string ablation_json = ablation.str();
    if (c.no_timestamps) {
        body = scrub_csv_text(header, body);
        ablation_json = scrub_json_text(ablation_json);
    }
    write_file(f.out, header + "\n" + body);
    write_file(f.ablation, ablation_json);

    if (!f.plot_data.empty()) {
        LibString curve;
        check(sist_scaling_curve(train.get(), test.get(), &hp, &of.cfg, f.fractions.data(),
                                 f.fractions.size(), c.seed, threads, curve.out()));
        std::string text = curve.str();
        if (c.no_timestamps) {
            const auto nl = text.find('\n');
            text = text.substr(0, nl + 1) + scrub_csv_text(text.substr(0, nl), text.substr(nl + 1));
        }
        write_file(f.plot_data, text);
    }

    const auto fields = split(row.str(), ',');
    // dataset,n,m,acc_sist,acc_oracle,time_sist_s,time_oracle_s,cands_sist,cands_oracle
    const double ts = c.no_timestamps ? 0.0 : std::stod(fields.at(5));
    const double to = c.no_timestamps ? 0.0 : std::stod(fields.at(6));
    std::printf("sist: accuracy=%s time=%.3fs candidates=%s | oracle: accuracy=%s time=%.3fs "
                "candidates=%s\n",
                fields.at(3).c_str(), ts, fields.at(7).c_str(), fields.at(4).c_str(), to,
                fields.at(8).c_str());
    return kExitOk;
}

int cmd_bench(const std::string& data, const HyperFlags& hf, const OracleFlags& of,
              const Common& c, bool with_oracle, int repeats, const std::string& out,
              const std::string& csv_out) {
    const auto train = load_dataset(data, true, c.znorm);
    const auto hp = hf.to_c(c.seed);
    LibString json, csv;
    check(sist_ablation(train.get(), &hp, &of.cfg, with_oracle ? 1 : 0, repeats,
                        thread_count(c.threads), json.out(), csv.out()));
    std::string json_text = json.str();
    std::string csv_text = csv.str();
    if (c.no_timestamps) {
        json_text = scrub_json_text(json_text);
        const auto nl = csv_text.find('\n');
        csv_text =
            csv_text.substr(0, nl + 1) + scrub_csv_text(csv_text.substr(0, nl), csv_text.substr(nl + 1));
    }
    write_file(out, json_text);
    if (!csv_out.empty()) write_file(csv_out, csv_text);

    for (const auto& e : nlohmann::json::parse(json_text)) {
        std::printf("%s: total=%.4fs feature=%.1f%% classifier=%.1f%%\n",
                    e["method"].get<std::string>().c_str(), e["total_s"].get<double>(),
                    100.0 * e["feature_share"].get<double>(),
                    100.0 * e["classifier_share"].get<double>());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Short isometric shapelet transform classifier"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sist_version());

    Common common;
    HyperFlags hyper;
    OracleFlags oracle;

    auto* train = app.add_subcommand("train", "train a model");
    std::string train_data, model_out = "model.json", train_report;
    train->add_option("--data", train_data, "training file (UCR format)")->required();
    train->add_option("--out", model_out, "model output path")->capture_default_str();
    train->add_option("--report", train_report, "training report path (default <out>.report.json)");
    hyper.attach(train);
    common.attach(train);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a model on a test file");
    std::string model_in, eval_data, eval_report, eval_csv;
    evaluate->add_option("--model", model_in, "model file")->required();
    evaluate->add_option("--data", eval_data, "test file (UCR format)")->required();
    evaluate->add_option("--report", eval_report, "EvalReport JSON path (default <model>.eval.json)");
    evaluate->add_option("--csv", eval_csv, "also write the EvalReport as a CSV row");
    common.attach(evaluate);

    auto* grid = app.add_subcommand("grid", "cross-validated grid search");
    std::string grid_data;
    GridFlags gf;
    HyperFlags grid_base;
    grid->add_option("--data", grid_data, "training file (UCR format)")->required();
    grid->add_option("--grid", gf.grid, "base lattice")
        ->check(CLI::IsMember({"full", "table1"}))
        ->capture_default_str();
    grid->add_option("--folds", gf.folds, "k for stratified k-fold")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    grid->add_option("--delete-overlap", gf.delete_overlap, "restrict: true,false")->delimiter(',');
    grid->add_option("--length,--lengths", gf.lengths, "restrict shapelet lengths")
        ->delimiter(',')
        ->check(kPositive);
    grid->add_option("--left-relax", gf.left, "restrict l")->delimiter(',')->check(CLI::NonNegativeNumber);
    grid->add_option("--right-relax", gf.right, "restrict r")->delimiter(',')->check(CLI::NonNegativeNumber);
    grid->add_option("--num-shapelets", gf.counts, "restrict N")->delimiter(',')->check(kPositive);
    grid->add_flag("--joint-relax", gf.joint_relax, "visit only l == r");
    grid->add_option("--out-cv", gf.out_cv, "cv table CSV path")->capture_default_str();
    grid->add_option("--out-best", gf.out_best, "winning hyperparameters JSON path")
        ->capture_default_str();
    grid_base.attach(grid, false);
    common.attach(grid);

    auto* compare = app.add_subcommand("compare", "SIST against the brute-force oracle");
    CompareFlags cf;
    compare->add_option("--train", cf.train, "training file")->required();
    compare->add_option("--test", cf.test, "test file")->required();
    compare->add_option("--out", cf.out, "comparison CSV path")->capture_default_str();
    compare->add_option("--ablation", cf.ablation, "stage-split JSON path")->capture_default_str();
    compare->add_option("--emit-plot-data", cf.plot_data, "scaling-curve CSV path");
    compare->add_option("--fractions", cf.fractions, "training fractions for the scaling curve")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    hyper.attach(compare);
    oracle.attach(compare);
    common.attach(compare);

    auto* bench = app.add_subcommand("bench", "stage-timing ablation");
    std::string bench_data, bench_out = "ablation.json", bench_csv;
    bool bench_oracle = true;
    int repeats = 3;
    bench->add_option("--data", bench_data, "training file")->required();
    bench->add_option("--out", bench_out, "ablation JSON path")->capture_default_str();
    bench->add_option("--csv", bench_csv, "ablation CSV path");
    bench->add_option("--repeats", repeats, "runs per method (median reported)")
        ->check(kPositive)
        ->capture_default_str();
    bench->add_flag("--oracle,!--no-oracle", bench_oracle, "include the oracle")->capture_default_str();
    hyper.attach(bench);
    oracle.attach(bench);
    common.attach(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*train) return cmd_train(train_data, hyper, common, model_out, train_report);
        if (*evaluate) return cmd_evaluate(model_in, eval_data, common, eval_report, eval_csv);
        if (*grid) return cmd_grid(grid_data, gf, grid_base, common);
        if (*compare) return cmd_compare(cf, hyper, oracle, common);
        if (*bench) {
            return cmd_bench(bench_data, hyper, oracle, common, bench_oracle, repeats, bench_out,
                             bench_csv);
        }
    } catch (const CliFailure& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        if (f.exit_code == kExitBudget) {
            std::fprintf(stderr,
                         "hint: raise --oracle-budget or narrow --oracle-min-length/--oracle-max-length\n");
        }
        return f.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitInternal;
}
