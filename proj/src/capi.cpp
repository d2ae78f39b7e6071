#include "sist/sist.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sist/error.hpp"
#include "sist/oracle.hpp"
#include "sist/pipeline.hpp"

struct sist_dataset {
    sist::LabeledDataset raw;
    std::optional<sist::ValidatedDataset> validated;

    const sist::ValidatedDataset& binary() {
        if (!validated) validated = sist::validate_binary_isometric(raw);
        return *validated;
    }
};

struct sist_model {
    sist::SistModel model;
};

namespace {

thread_local std::string tl_last_error;

sist_status set_error(sist_status status, const std::string& message) {
    tl_last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
sist_status guarded(Body&& body) {
    try {
        tl_last_error.clear();
        body();
        return SIST_OK;
    } catch (const sist::Error& e) {
        return set_error(static_cast<sist_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(SIST_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(SIST_INTERNAL, e.what());
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) sist::fail(sist::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit(char** dst, const std::string& s) {
    if (dst != nullptr) *dst = dup_string(s);
}

sist::Hyperparams to_cpp(const sist_hyperparams& h) {
    sist::Hyperparams hp;
    hp.delete_overlap = h.delete_overlap != 0;
    hp.shapelet_length = h.shapelet_length;
    hp.left_relax = h.left_relax;
    hp.right_relax = h.right_relax;
    hp.num_shapelets = h.num_shapelets;
    if (h.relax_mode != SIST_RELAX_SHIFTED_WINDOW && h.relax_mode != SIST_RELAX_SUBSEQUENCE_DP) {
        sist::fail(sist::ErrorCode::InvalidArgument, "unknown relax mode");
    }
    hp.relax_mode = h.relax_mode == SIST_RELAX_SUBSEQUENCE_DP ? sist::RelaxMode::SubsequenceDP
                                                              : sist::RelaxMode::ShiftedWindow;
    if (h.overlap_scope != SIST_OVERLAP_ANY_SERIES && h.overlap_scope != SIST_OVERLAP_SAME_SERIES) {
        sist::fail(sist::ErrorCode::InvalidArgument, "unknown overlap scope");
    }
    hp.overlap_scope = h.overlap_scope == SIST_OVERLAP_SAME_SERIES ? sist::OverlapScope::SameSeries
                                                                   : sist::OverlapScope::AnySeries;
    hp.reg_c = h.reg_c;
    hp.tol = h.tol;
    hp.max_iter = h.max_iter;
    hp.standardize = h.standardize != 0;
    hp.seed = h.seed;
    hp.validate();
    return hp;
}

sist::OracleConfig to_cpp(const sist_oracle_config& c, const sist::Hyperparams& hp) {
    sist::OracleConfig cfg;
    cfg.min_length = c.min_length;
    cfg.max_length = c.max_length;
    cfg.num_shapelets = c.num_shapelets;
    cfg.candidate_budget = c.candidate_budget;
    cfg.classifier = {hp.reg_c, hp.tol, hp.max_iter, hp.seed, hp.standardize};
    return cfg;
}

template <class T>
std::vector<T> to_vector(const T* data, std::size_t n, const char* what) {
    if (n == 0 || data == nullptr) {
        sist::fail(sist::ErrorCode::InvalidArgument, std::string("grid list '") + what + "' is empty");
    }
    return std::vector<T>(data, data + n);
}

constexpr int kFullDeleteOverlap[] = {1, 0};
constexpr size_t kFullLengths[] = {3, 4};
constexpr int kFullRelax[] = {3, 4};
constexpr size_t kFullCounts[] = {10, 50, 100, 250, 500, 750, 1000, 1250, 1500, 2000};

}  // namespace

extern "C" {

const char* sist_version(void) { return sist::builder_version(); }

const char* sist_status_name(sist_status status) {
    return sist::to_string(static_cast<sist::ErrorCode>(status));
}

const char* sist_last_error(void) { return tl_last_error.c_str(); }

void sist_string_free(char* s) { std::free(s); }

void sist_hyperparams_default(sist_hyperparams* hp) {
    if (hp == nullptr) return;
    const sist::Hyperparams d;
    hp->delete_overlap = d.delete_overlap ? 1 : 0;
    hp->shapelet_length = d.shapelet_length;
    hp->left_relax = d.left_relax;
    hp->right_relax = d.right_relax;
    hp->num_shapelets = d.num_shapelets;
    hp->relax_mode = SIST_RELAX_SHIFTED_WINDOW;
    hp->overlap_scope = SIST_OVERLAP_ANY_SERIES;
    hp->reg_c = d.reg_c;
    hp->tol = d.tol;
    hp->max_iter = d.max_iter;
    hp->standardize = d.standardize ? 1 : 0;
    hp->seed = d.seed;
}

void sist_grid_full(sist_grid* grid) {
    if (grid == nullptr) return;
    grid->delete_overlap = kFullDeleteOverlap;
    grid->n_delete_overlap = 2;
    grid->lengths = kFullLengths;
    grid->n_lengths = 2;
    grid->left_relax = kFullRelax;
    grid->n_left_relax = 2;
    grid->right_relax = kFullRelax;
    grid->n_right_relax = 2;
    grid->num_shapelets = kFullCounts;
    grid->n_num_shapelets = 10;
    grid->joint_relax = 0;
    sist_hyperparams_default(&grid->base);
}

void sist_oracle_config_default(sist_oracle_config* cfg) {
    if (cfg == nullptr) return;
    const sist::OracleConfig d;
    cfg->min_length = d.min_length;
    cfg->max_length = d.max_length;
    cfg->num_shapelets = d.num_shapelets;
    cfg->candidate_budget = d.candidate_budget;
}

sist_status sist_dataset_parse(const char* text, size_t len, int validate, int znorm,
                               sist_dataset** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        auto d = std::make_unique<sist_dataset>();
        d->raw = sist::parse_ucr(std::string_view(text, len));
        if (znorm) d->raw = sist::z_normalized(d->raw);
        if (validate) d->binary();
        *out = d.release();
    });
}

sist_status sist_dataset_load(const char* path, int validate, int znorm, sist_dataset** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        auto d = std::make_unique<sist_dataset>();
        d->raw = sist::load_ucr_file(path);
        if (znorm) d->raw = sist::z_normalized(d->raw);
        if (validate) d->binary();
        *out = d.release();
    });
}

void sist_dataset_free(sist_dataset* d) { delete d; }

size_t sist_dataset_size(const sist_dataset* d) { return d ? d->raw.size() : 0; }

size_t sist_dataset_length(const sist_dataset* d) { return d ? d->raw.length() : 0; }

sist_status sist_train(const sist_dataset* train, const sist_hyperparams* hp,
                       const char* dataset_name, unsigned threads, sist_model** out) {
    return guarded([&] {
        require(train, "train");
        require(hp, "hyperparams");
        require(out, "out");
        auto& d = const_cast<sist_dataset*>(train)->binary();
        auto m = std::make_unique<sist_model>();
        m->model = sist::train_sist(d, to_cpp(*hp), dataset_name ? dataset_name : "", threads);
        *out = m.release();
    });
}

void sist_model_free(sist_model* m) { delete m; }

sist_status sist_model_train_report(const sist_model* m, int with_timings, char** json) {
    return guarded([&] {
        require(m, "model");
        require(json, "json");
        const auto& p = m->model.provenance;
        const sist::StageTimings t = with_timings ? p.timings : sist::StageTimings{};
        nlohmann::ordered_json j{
            {"dataset", p.dataset_name},
            {"train_size", p.train_size},
            {"series_length", p.series_length},
            {"hyperparams", nlohmann::ordered_json::parse(sist::hyperparams_to_json(m->model.hyperparams))},
            {"candidates_examined", p.candidates_examined},
            {"num_shapelets", m->model.basis.size()},
            {"training_accuracy", p.training_accuracy},
            {"classifier_iterations", m->model.linear.meta.iterations},
            {"classifier_converged", m->model.linear.meta.converged},
            {"timings",
             {{"extraction_s", t.extraction_s},
              {"scoring_s", t.scoring_s},
              {"ranking_s", t.ranking_s},
              {"transform_s", t.transform_s},
              {"classifier_s", t.classifier_s},
              {"total_s", t.total_s}}}};
        emit(json, j.dump(2) + "\n");
    });
}

double sist_model_training_accuracy(const sist_model* m) {
    return m ? m->model.provenance.training_accuracy : 0.0;
}

size_t sist_model_num_shapelets(const sist_model* m) { return m ? m->model.basis.size() : 0; }

sist_status sist_predict(const sist_model* m, const sist_dataset* data, unsigned threads,
                         int* signs, size_t capacity) {
    return guarded([&] {
        require(m, "model");
        require(data, "data");
        require(signs, "signs");
        if (capacity < data->raw.size()) {
            sist::fail(sist::ErrorCode::InvalidArgument, "output buffer too small");
        }
        const auto predicted = sist::predict(m->model, data->raw, threads);
        std::copy(predicted.begin(), predicted.end(), signs);
    });
}

sist_status sist_evaluate(const sist_model* m, const sist_dataset* test, unsigned threads,
                          double* accuracy, char** report_json) {
    return guarded([&] {
        require(m, "model");
        require(test, "test");
        const auto report = sist::evaluate(m->model, test->raw, threads);
        if (accuracy) *accuracy = report.accuracy;
        emit(report_json, sist::eval_report_json(report));
    });
}

sist_status sist_model_save(const sist_model* m, int with_timings, char** text) {
    return guarded([&] {
        require(m, "model");
        require(text, "text");
        emit(text, sist::save_model(m->model, with_timings != 0));
    });
}

sist_status sist_model_load(const char* text, size_t len, sist_model** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        auto m = std::make_unique<sist_model>();
        m->model = sist::load_model(std::string_view(text, len));
        *out = m.release();
    });
}

sist_status sist_model_save_file(const sist_model* m, const char* path, int with_timings) {
    return guarded([&] {
        require(m, "model");
        require(path, "path");
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) sist::fail(sist::ErrorCode::IoError, std::string("cannot write ") + path);
        f << sist::save_model(m->model, with_timings != 0);
        if (!f) sist::fail(sist::ErrorCode::IoError, std::string("write failed: ") + path);
    });
}

sist_status sist_model_load_file(const char* path, sist_model** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        std::ifstream f(path, std::ios::binary);
        if (!f) sist::fail(sist::ErrorCode::IoError, std::string("model not found: ") + path);
        std::ostringstream ss;
        ss << f.rdbuf();
        auto m = std::make_unique<sist_model>();
        m->model = sist::load_model(ss.str());
        *out = m.release();
    });
}

sist_status sist_grid_search(const sist_dataset* train, const sist_grid* grid, int folds,
                             uint64_t seed, unsigned threads, char** best_json, char** cv_csv) {
    return guarded([&] {
        require(train, "train");
        require(grid, "grid");
        sist::HyperGrid g;
        g.base = to_cpp(grid->base);
        g.delete_overlap.clear();
        for (int v : to_vector(grid->delete_overlap, grid->n_delete_overlap, "delete_overlap")) {
            g.delete_overlap.push_back(v != 0);
        }
        g.lengths = to_vector(grid->lengths, grid->n_lengths, "lengths");
        g.left = to_vector(grid->left_relax, grid->n_left_relax, "left_relax");
        g.right = to_vector(grid->right_relax, grid->n_right_relax, "right_relax");
        g.counts = to_vector(grid->num_shapelets, grid->n_num_shapelets, "num_shapelets");
        g.joint_relax = grid->joint_relax != 0;
        const auto cells = g.cells();
        auto& d = const_cast<sist_dataset*>(train)->binary();
        const auto result = sist::grid_search_cv(d, cells, folds, seed, threads);
        emit(best_json, sist::hyperparams_to_json(result.best));
        emit(cv_csv, sist::cv_table_csv(result));
    });
}

sist_status sist_compare(const sist_dataset* train, const sist_dataset* test,
                         const sist_hyperparams* hp, const sist_oracle_config* oracle,
                         const char* dataset_name, unsigned threads, char** csv_row,
                         char** ablation_json) {
    return guarded([&] {
        require(train, "train");
        require(test, "test");
        require(hp, "hyperparams");
        require(oracle, "oracle config");
        const auto params = to_cpp(*hp);
        auto& d = const_cast<sist_dataset*>(train)->binary();
        const auto row = sist::compare(d, test->raw, params, to_cpp(*oracle, params),
                                       dataset_name ? dataset_name : "", threads);
        emit(csv_row, sist::comparison_csv_row(row));
        sist::AblationReport ablation;
        ablation.entries.push_back({"sist", row.sist_timings});
        ablation.entries.push_back({"oracle", row.oracle_timings});
        emit(ablation_json, ablation.to_json());
    });
}

const char* sist_compare_csv_header(void) {
    static const std::string header = sist::comparison_csv_header();
    return header.c_str();
}

sist_status sist_scaling_curve(const sist_dataset* train, const sist_dataset* test,
                               const sist_hyperparams* hp, const sist_oracle_config* oracle,
                               const double* fractions, size_t n_fractions, uint64_t seed,
                               unsigned threads, char** csv) {
    return guarded([&] {
        require(train, "train");
        require(test, "test");
        require(hp, "hyperparams");
        require(oracle, "oracle config");
        require(csv, "csv");
        const auto params = to_cpp(*hp);
        const auto f = to_vector(fractions, n_fractions, "fractions");
        auto& d = const_cast<sist_dataset*>(train)->binary();
        const auto points =
            sist::scaling_curve(d, test->raw, params, to_cpp(*oracle, params), f, seed, threads);
        emit(csv, sist::scaling_csv(points));
    });
}

sist_status sist_ablation(const sist_dataset* train, const sist_hyperparams* hp,
                          const sist_oracle_config* oracle, int include_oracle, int repeats,
                          unsigned threads, char** json, char** csv) {
    return guarded([&] {
        require(train, "train");
        require(hp, "hyperparams");
        require(oracle, "oracle config");
        const auto params = to_cpp(*hp);
        auto& d = const_cast<sist_dataset*>(train)->binary();
        const auto report = sist::ablation_report(d, params, to_cpp(*oracle, params),
                                                  include_oracle != 0, threads, repeats);
        emit(json, report.to_json());
        emit(csv, report.to_csv());
    });
}

}  // extern "C"
