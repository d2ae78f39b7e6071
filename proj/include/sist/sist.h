/*
 * C interface to the short isometric shapelet transform classifier.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every call returns a sist_status; on failure
 * sist_last_error() describes the problem for the calling thread. Strings
 * returned through char** out-parameters are heap allocated and must be
 * released with sist_string_free.
 */
#ifndef SIST_SIST_H
#define SIST_SIST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SIST_BUILDING_LIBRARY)
#    define SIST_API __declspec(dllexport)
#  else
#    define SIST_API __declspec(dllimport)
#  endif
#else
#  define SIST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sist_status {
    SIST_OK = 0,
    SIST_INVALID_ARGUMENT = 1,
    SIST_IO_ERROR = 2,
    SIST_EMPTY_INPUT = 3,
    SIST_RAGGED_LENGTHS = 4,
    SIST_NON_NUMERIC_VALUE = 5,
    SIST_NON_FINITE_VALUE = 6,
    SIST_NOT_BINARY = 7,
    SIST_TOO_FEW_PER_CLASS = 8,
    SIST_LENGTH_MISMATCH = 9,
    SIST_SHAPELET_LONGER_THAN_SERIES = 10,
    SIST_PLACEMENT_OUT_OF_RANGE = 11,
    SIST_LENGTH_TOO_LARGE = 12,
    SIST_EMPTY_CLASS = 13,
    SIST_METRIC_PLACEMENT_MISMATCH = 14,
    SIST_INVALID_CUT_POINTS = 15,
    SIST_SINGLE_CLASS = 16,
    SIST_DIMENSION_MISMATCH = 17,
    SIST_CANDIDATE_STARVATION = 18,
    SIST_UNKNOWN_CLASS = 19,
    SIST_SCHEMA_VERSION_MISMATCH = 20,
    SIST_CORRUPT_MODEL = 21,
    SIST_CANDIDATE_BUDGET_EXCEEDED = 22,
    SIST_INTERNAL = 99
} sist_status;

typedef enum sist_relax_mode {
    SIST_RELAX_SHIFTED_WINDOW = 0,
    SIST_RELAX_SUBSEQUENCE_DP = 1
} sist_relax_mode;

typedef enum sist_overlap_scope {
    SIST_OVERLAP_ANY_SERIES = 0,
    SIST_OVERLAP_SAME_SERIES = 1
} sist_overlap_scope;

typedef struct sist_dataset sist_dataset;
typedef struct sist_model sist_model;

typedef struct sist_hyperparams {
    int delete_overlap;
    size_t shapelet_length;
    int left_relax;
    int right_relax;
    size_t num_shapelets;
    int relax_mode;     /* sist_relax_mode */
    int overlap_scope;  /* sist_overlap_scope */
    double reg_c;
    double tol;
    int max_iter;
    int standardize;
    uint64_t seed;
} sist_hyperparams;

/* Lattice for sist_grid_search. Each list must be non-empty. */
typedef struct sist_grid {
    const int* delete_overlap;
    size_t n_delete_overlap;
    const size_t* lengths;
    size_t n_lengths;
    const int* left_relax;
    size_t n_left_relax;
    const int* right_relax;
    size_t n_right_relax;
    const size_t* num_shapelets;
    size_t n_num_shapelets;
    int joint_relax;        /* visit only left == right */
    sist_hyperparams base;  /* fields the lattice does not vary */
} sist_grid;

typedef struct sist_oracle_config {
    size_t min_length;
    size_t max_length; /* 0: series length */
    size_t num_shapelets;
    uint64_t candidate_budget;
} sist_oracle_config;

SIST_API const char* sist_version(void);
SIST_API const char* sist_status_name(sist_status status);
/* Message for the most recent failure on this thread ("" if none). */
SIST_API const char* sist_last_error(void);
SIST_API void sist_string_free(char* s);

/* Defaults: delete_overlap=1, L=3, l=r=3, N=10, shifted window, any-series
 * overlap, C=1, tol=1e-6, max_iter=10000, no standardisation, seed=42. */
SIST_API void sist_hyperparams_default(sist_hyperparams* hp);
/* The full lattice: DO {1,0}, L {3,4}, l {3,4}, r {3,4},
 * N {10,50,100,250,500,750,1000,1250,1500,2000}. Arrays are static. */
SIST_API void sist_grid_full(sist_grid* grid);
SIST_API void sist_oracle_config_default(sist_oracle_config* cfg);

/* ---- datasets ---------------------------------------------------------- */

/* Parses UCR text (label first; tab, comma or whitespace separated).
 * `validate` != 0 additionally requires exactly two classes.
 * `znorm` != 0 z-normalises every series after parsing. */
SIST_API sist_status sist_dataset_parse(const char* text, size_t len, int validate, int znorm,
                                        sist_dataset** out);
SIST_API sist_status sist_dataset_load(const char* path, int validate, int znorm,
                                       sist_dataset** out);
SIST_API void sist_dataset_free(sist_dataset* d);
SIST_API size_t sist_dataset_size(const sist_dataset* d);
SIST_API size_t sist_dataset_length(const sist_dataset* d);

/* ---- training and inference ------------------------------------------- */

/* `threads` = 0 picks the hardware concurrency. */
SIST_API sist_status sist_train(const sist_dataset* train, const sist_hyperparams* hp,
                                const char* dataset_name, unsigned threads, sist_model** out);
SIST_API void sist_model_free(sist_model* m);

/* JSON: hyperparams, candidate count, shapelet count, training accuracy,
 * stage timings (zeroed when with_timings == 0). */
SIST_API sist_status sist_model_train_report(const sist_model* m, int with_timings, char** json);
SIST_API double sist_model_training_accuracy(const sist_model* m);
SIST_API size_t sist_model_num_shapelets(const sist_model* m);

/* Writes canonical signs (-1 or +1) for each series into `signs`, which
 * must hold sist_dataset_size(data) entries. */
SIST_API sist_status sist_predict(const sist_model* m, const sist_dataset* data, unsigned threads,
                                  int* signs, size_t capacity);
/* EvalReport as JSON; `accuracy` may be NULL. */
SIST_API sist_status sist_evaluate(const sist_model* m, const sist_dataset* test, unsigned threads,
                                   double* accuracy, char** report_json);

/* ---- persistence ------------------------------------------------------- */

SIST_API sist_status sist_model_save(const sist_model* m, int with_timings, char** text);
SIST_API sist_status sist_model_load(const char* text, size_t len, sist_model** out);
SIST_API sist_status sist_model_save_file(const sist_model* m, const char* path, int with_timings);
SIST_API sist_status sist_model_load_file(const char* path, sist_model** out);

/* ---- experiments ------------------------------------------------------- */

/* Stratified k-fold CV over the lattice. `best_json` receives the winning
 * hyperparameters, `cv_csv` one row per cell. Either may be NULL. */
SIST_API sist_status sist_grid_search(const sist_dataset* train, const sist_grid* grid,
                                      int folds, uint64_t seed, unsigned threads,
                                      char** best_json, char** cv_csv);

/* One comparison CSV row (no header) plus the ablation split as JSON. */
SIST_API sist_status sist_compare(const sist_dataset* train, const sist_dataset* test,
                                  const sist_hyperparams* hp, const sist_oracle_config* oracle,
                                  const char* dataset_name, unsigned threads, char** csv_row,
                                  char** ablation_json);
SIST_API const char* sist_compare_csv_header(void);

/* Plot-ready CSV (method,n,m,scale,train_time_s,accuracy) over stratified
 * fractions of the training set. */
SIST_API sist_status sist_scaling_curve(const sist_dataset* train, const sist_dataset* test,
                                        const sist_hyperparams* hp,
                                        const sist_oracle_config* oracle, const double* fractions,
                                        size_t n_fractions, uint64_t seed, unsigned threads,
                                        char** csv);

/* Stage-timing split for SIST (and the oracle when include_oracle != 0),
 * median over `repeats` runs per stage. JSON array. */
SIST_API sist_status sist_ablation(const sist_dataset* train, const sist_hyperparams* hp,
                                   const sist_oracle_config* oracle, int include_oracle,
                                   int repeats, unsigned threads, char** json, char** csv);

#ifdef __cplusplus
}
#endif

#endif /* SIST_SIST_H */
