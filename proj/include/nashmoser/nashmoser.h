#ifndef NASHMOSER_H
#define NASHMOSER_H

#include <stddef.h>
#include <stdint.h>

#if defined(NM_BUILDING_LIBRARY)
#define NM_API __attribute__((visibility("default")))
#else
#define NM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns nm_status. On failure nm_last_error() holds a
 * message for the calling thread until its next failing call. */
typedef enum nm_status {
    NM_OK = 0,
    NM_ERR_INVALID_ARGUMENT = 1,
    NM_ERR_DIMENSION_MISMATCH = 2,
    NM_ERR_DEGENERATE_INPUT = 3,
    NM_ERR_OUTSIDE_DOMAIN = 4,
    NM_ERR_LEFT_DOMAIN = 5,
    NM_ERR_NEUMANN_DIVERGENCE = 6,
    NM_ERR_STAGNATION = 7,
    NM_ERR_MAX_ITER = 8,
    NM_ERR_TRUNCATION_CEILING = 9,
    NM_ERR_EXPONENT_DERIVATION = 10,
    NM_ERR_DIVISOR_FLOOR = 11,
    NM_ERR_CONDITION_VIOLATED = 12,
    NM_ERR_INSUFFICIENT_ROWS = 13,
    NM_ERR_LAMBDA_OUT_OF_RANGE = 14,
    NM_ERR_CONFIG = 15,
    NM_ERR_IO = 16,
    NM_ERR_DIAGNOSTIC_FAILED = 17,
    NM_ERR_INTERNAL = 18
} nm_status;

NM_API const char* nm_version(void);
NM_API const char* nm_status_string(nm_status status);
NM_API const char* nm_last_error(void);

/* Strings copied out follow one convention: *needed receives the size
 * including the terminator; buf may be NULL when cap is 0. */

/* ---- configuration ---- */

typedef struct nm_config nm_config;

NM_API nm_status nm_config_new(nm_config** out);
NM_API nm_status nm_config_parse(const char* text, nm_config** out);
NM_API nm_status nm_config_load(const char* path, nm_config** out);
NM_API void nm_config_free(nm_config* config);
NM_API nm_status nm_config_set(nm_config* config, const char* key, const char* value);
NM_API nm_status nm_config_get(const nm_config* config, const char* key, char* buf, size_t cap, size_t* needed);
NM_API nm_status nm_config_dump(const nm_config* config, char* buf, size_t cap, size_t* needed);
/* 16 hex digits plus terminator */
NM_API nm_status nm_config_hash(const nm_config* config, char out[17]);

NM_API size_t nm_config_key_count(void);
NM_API nm_status nm_config_key_info(size_t index, const char** name, const char** default_value,
                                    const char** doc);

/* ---- experiment commands ---- */

typedef enum nm_command {
    NM_CMD_VERIFY_SPACE = 0,
    NM_CMD_VERIFY_PROBLEM = 1,
    NM_CMD_SOLVE = 2,
    NM_CMD_SWEEP = 3
} nm_command;

typedef struct nm_result nm_result;

/* NM_OK means the command ran; its verdict is nm_result_exit_code. */
NM_API nm_status nm_run(const nm_config* config, nm_command command, nm_result** out);
NM_API int nm_result_exit_code(const nm_result* result);
NM_API const char* nm_result_message(const nm_result* result);
NM_API const char* nm_result_summary_json(const nm_result* result);
NM_API void nm_result_free(nm_result* result);

/* ---- graded elements: coefficients c_k, |k| <= order ---- */

typedef struct nm_element nm_element;

NM_API nm_status nm_element_new(int order, nm_element** out);
/* |c_k| = u_k (1+|k|)^(-decay), u_k in [0.5, 1], real valued */
NM_API nm_status nm_element_random(int order, uint64_t seed, double decay, nm_element** out);
NM_API nm_status nm_element_clone(const nm_element* x, nm_element** out);
NM_API void nm_element_free(nm_element* x);
NM_API int nm_element_order(const nm_element* x);
NM_API nm_status nm_element_set(nm_element* x, int k, double re, double im);
NM_API nm_status nm_element_get(const nm_element* x, int k, double* re, double* im);
/* sup_k (1+|k|)^n |c_k| */
NM_API nm_status nm_element_seminorm(const nm_element* x, double n, double* out);
NM_API nm_status nm_element_smooth(const nm_element* x, double theta, nm_element** out);
NM_API nm_status nm_element_rough(const nm_element* x, double theta, nm_element** out);

/* ---- exponents ---- */

typedef struct nm_exponents {
    double lambda;
    double tau;
    double d;
    double m;
    double mu;
    double s;
    double s0;
    double delta;
    int degenerate;
} nm_exponents;

NM_API nm_status nm_derive_exponents(double lambda, double tau, double d, double m, nm_exponents* out);
NM_API nm_status nm_growth_exponent(const nm_exponents* exps, double n, double* out);

/* ---- problems and solves ---- */

typedef struct nm_problem nm_problem;

/* Built from the problem.* keys of config. */
NM_API nm_status nm_problem_new(const nm_config* config, nm_problem** out);
NM_API void nm_problem_free(nm_problem* problem);
NM_API int nm_problem_order(const nm_problem* problem);
NM_API nm_status nm_problem_exponents(const nm_problem* problem, const nm_config* config, nm_exponents* out);
NM_API nm_status nm_problem_apply(const nm_problem* problem, const nm_element* x, nm_element** out);
NM_API nm_status nm_problem_describe(const nm_problem* problem, char* buf, size_t cap, size_t* needed);

typedef struct nm_solution nm_solution;

/* Runs the iteration for target y with the schedule and solver keys of config
 * and the analytic delta. A failed iteration (left U, stagnation, ...) still
 * returns NM_OK with the status recorded in the solution; only input errors
 * such as |y|_s0 >= delta fail the call. */
NM_API nm_status nm_solve(const nm_problem* problem, const nm_element* y, const nm_config* config,
                          nm_solution** out);
NM_API int nm_solution_converged(const nm_solution* solution);
NM_API const char* nm_solution_status(const nm_solution* solution);
NM_API int nm_solution_iterations(const nm_solution* solution);
NM_API double nm_solution_residual(const nm_solution* solution);
NM_API nm_status nm_solution_element(const nm_solution* solution, nm_element** out);
NM_API const char* nm_solution_trace_csv(const nm_solution* solution);
NM_API void nm_solution_free(nm_solution* solution);

#ifdef __cplusplus
}
#endif

#endif
