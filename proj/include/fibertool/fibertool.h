#ifndef FIBERTOOL_FIBERTOOL_H
#define FIBERTOOL_FIBERTOOL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FT_API __declspec(dllexport)
#else
#define FT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ft_status {
    FT_OK = 0,
    FT_ERR_USAGE = 1,
    FT_ERR_VERIFICATION = 2,
    FT_ERR_CAP_EXCEEDED = 3,
    FT_ERR_INVALID = 4,
    FT_ERR_PARSE = 5,
    FT_ERR_IO = 6,
    FT_ERR_OVERFLOW = 7,
    FT_ERR_INTERNAL = 8
} ft_status;

typedef struct ft_model ft_model;
typedef struct ft_table ft_table;
typedef struct ft_moveset ft_moveset;

/* Message of the last failing call on this thread; empty after a success. */
FT_API const char* ft_last_error(void);
FT_API const char* ft_version(void);
FT_API const char* ft_status_name(ft_status status);

/* Strings returned through char** out-parameters are owned by the caller. */
FT_API void ft_string_free(char* s);

/* Models */
FT_API ft_status ft_model_parse(const char* spec, ft_model** out);
FT_API ft_status ft_model_from_matrix(size_t rows, size_t cols, const int64_t* entries, ft_model** out);
FT_API ft_status ft_model_read_matrix(const char* path, ft_model** out);
FT_API void ft_model_free(ft_model* model);
FT_API size_t ft_model_rows(const ft_model* model);
FT_API size_t ft_model_cols(const ft_model* model);
FT_API int64_t ft_model_entry(const ft_model* model, size_t row, size_t col);
/* 4ti2 matrix text. */
FT_API ft_status ft_model_matrix_text(const ft_model* model, char** out);
FT_API ft_status ft_model_describe_json(const ft_model* model, char** out);

/* Tables: CSV, the "k d_1 ... d_k" vector form, or raw cells. */
FT_API ft_status ft_table_read(const char* path, const ft_model* model, ft_table** out);
FT_API ft_status ft_table_from_cells(const ft_model* model, size_t n, const int64_t* cells, ft_table** out);
FT_API void ft_table_free(ft_table* table);
FT_API size_t ft_table_size(const ft_table* table);
FT_API const int64_t* ft_table_cells(const ft_table* table);

/* Move sets. kind: lattice, graver, markov, basic, circuits. */
FT_API ft_status ft_bases_compute(const ft_model* model, const char* kind, int64_t norm_cap, ft_moveset** out);
FT_API ft_status ft_moveset_read(const char* path, const ft_model* model, ft_moveset** out);
FT_API void ft_moveset_free(ft_moveset* moves);
FT_API size_t ft_moveset_size(const ft_moveset* moves);
FT_API int ft_moveset_complete(const ft_moveset* moves);
FT_API ft_status ft_moveset_text(const ft_moveset* moves, char** out);
FT_API ft_status ft_moveset_summary_json(const ft_moveset* moves, char** out);

/* Cells of S from a file of 1-based multi-indices; free with ft_cells_free. */
FT_API ft_status ft_cells_read(const char* path, const ft_model* model, size_t** cells, size_t* count);
FT_API void ft_cells_free(size_t* cells);

typedef struct ft_relaxation {
    int64_t q;
    int all_cells;       /* nonzero: S is every cell */
    const size_t* cells; /* 0-based flat indices, used when all_cells == 0 */
    size_t n_cells;
} ft_relaxation;

/* Fibers; relax may be NULL for the plain fiber. */
FT_API ft_status ft_fiber_count(const ft_model* model, const ft_table* table, const ft_relaxation* relax, size_t cap,
                                char** out_json);
FT_API ft_status ft_fiber_enumerate(const ft_model* model, const ft_table* table, const ft_relaxation* relax,
                                    size_t cap, char** out_json);
FT_API ft_status ft_fiber_connectivity(const ft_model* model, const ft_table* table, const ft_moveset* moves,
                                       const ft_relaxation* relax, size_t cap, char** out_json);

typedef enum ft_target { FT_TARGET_UNIFORM = 0, FT_TARGET_HYPERGEOMETRIC = 1 } ft_target;
typedef enum ft_statistic { FT_STAT_PEARSON = 0, FT_STAT_G2 = 1 } ft_statistic;

typedef struct ft_chain_config {
    size_t length;
    size_t burn_in;
    int has_burn_in; /* zero: burn-in is length / 10 */
    size_t thinning;
    uint64_t seed;
    size_t runs;     /* run r uses seed + r */
    size_t window;   /* acceptance window length */
    ft_target target;
    ft_statistic statistic;
    int reset_on_reject;
} ft_chain_config;

FT_API ft_chain_config ft_chain_config_default(void);

/* Goodness-of-fit test by Markov chain. out_csv (nullable) receives per-window acceptance rows. */
FT_API ft_status ft_test_run(const ft_model* model, const ft_table* table, const ft_moveset* moves,
                             const ft_relaxation* relax, const ft_chain_config* config, char** out_json,
                             char** out_csv);

/* Two-sample Kolmogorov-Smirnov test. */
FT_API ft_status ft_ks_two_sample(const double* x, size_t nx, const double* y, size_t ny, double* statistic,
                                  double* p_value);

/* n-fold matrices. out_moves (nullable) receives the lifted Graver basis in 4ti2 form. */
FT_API ft_status ft_nfold(const ft_model* a, const ft_model* b, int64_t n, int complexity_only, int64_t norm_cap,
                          char** out_json, char** out_moves);
FT_API ft_status ft_nfold_hierarchical_bound(const char* complex_faces, const int64_t* dims, size_t k,
                                             const size_t* v, size_t nv, int64_t norm_cap, char** out_json);

/* Certificates; FT_ERR_VERIFICATION when a check fails, with out_json still filled in. */
FT_API ft_status ft_counterexample_thm41(int64_t n, int64_t q_max, size_t cap, char** out_json);
FT_API ft_status ft_counterexample_antistair(int64_t i_levels, int64_t j_levels, const int64_t* tau, size_t n_tau,
                                             int tau_on_i, int64_t q, size_t cap, char** out_json);
FT_API ft_status ft_counterexample_theta(const int64_t* theta, size_t eta, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
