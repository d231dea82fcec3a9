/* womc — C interface to the WOM rewrite-coding library.
 *
 * Conventions: every function returns a womc_status (WOMC_OK on success) and
 * writes results through out-parameters. Opaque handles are created and
 * destroyed in matched pairs. On failure, womc_last_error() returns a
 * thread-local detail message valid until the next failing call on the same
 * thread. Bit buffers are one bit per byte (values 0 or 1).
 */

#ifndef WOMC_H
#define WOMC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define WOMC_API __declspec(dllexport)
#else
#define WOMC_API __attribute__((visibility("default")))
#endif

typedef enum womc_status {
  WOMC_OK = 0,
  WOMC_ERR_INVALID_ARGUMENT = 1, /* bad pointer, dimension or range */
  WOMC_ERR_DOMAIN = 2,           /* parameter outside its mathematical domain */
  WOMC_ERR_IO = 3,               /* file could not be read or written */
  WOMC_ERR_PARSE = 4,            /* file contents malformed */
  WOMC_ERR_LIMIT = 5,            /* exceeds an enumeration/oracle limit */
  WOMC_ERR_INTERNAL = 6
} womc_status;

typedef struct womc_model womc_model; /* opaque */
typedef struct womc_set womc_set;     /* opaque */

WOMC_API const char* womc_version(void);
WOMC_API const char* womc_status_message(womc_status status);
WOMC_API const char* womc_last_error(void);

/* ---- model ---- */

typedef struct womc_model_stats {
  double conditional_entropy; /* (1-s) H(t), bits per cell */
  double capacity;            /* equals conditional_entropy */
  double expected_flip_fraction; /* (1-s) t */
} womc_model_stats;

/* Requires 0 < s < 1 and 0 < t < 1. */
WOMC_API womc_status womc_model_create(double s, double t, womc_model** out);
WOMC_API void womc_model_destroy(womc_model* model);
WOMC_API womc_status womc_model_get_stats(const womc_model* model,
                                          womc_model_stats* out);
WOMC_API womc_status womc_entropy(double p, double* out);

/* out_bits must hold n_cells bytes. Deterministic given seed. */
WOMC_API womc_status womc_sample_state(const womc_model* model, size_t n_cells,
                                       uint64_t seed, uint8_t* out_bits);

/* ---- construction ---- */

typedef enum womc_method {
  WOMC_METHOD_EXACT = 0,      /* full enumeration; N <= 10 */
  WOMC_METHOD_MONTE_CARLO = 1
} womc_method;

typedef enum womc_select_mode {
  WOMC_SELECT_THRESHOLD = 0,  /* keep indices with half-deviation <= param */
  WOMC_SELECT_TARGET_RATE = 1 /* keep ceil(param * N * capacity) best indices */
} womc_select_mode;

typedef struct womc_construct_params {
  womc_method method;
  womc_select_mode mode;
  double threshold_or_rate;
  uint64_t samples; /* Monte Carlo sample count; ignored for exact */
  uint64_t seed;    /* Monte Carlo seed; ignored for exact */
} womc_construct_params;

typedef struct womc_set_info {
  size_t n_cells;
  size_t message_length;
  double s;
  double t;
  womc_method method;
  womc_select_mode mode;
  double threshold_or_rate;
  uint64_t samples;
  uint64_t seed;
  int has_stats;
} womc_set_info;

WOMC_API womc_status womc_construct(const womc_model* model, uint32_t log2_n,
                                    const womc_construct_params* params,
                                    womc_set** out);
WOMC_API void womc_set_destroy(womc_set* set);
WOMC_API womc_status womc_set_get_info(const womc_set* set, womc_set_info* out);
/* buf must hold at least message_length entries. */
WOMC_API womc_status womc_set_get_indices(const womc_set* set, uint32_t* buf,
                                          size_t buf_len);
WOMC_API womc_status womc_set_save(const womc_set* set, const char* path);
WOMC_API womc_status womc_set_load(const char* path, womc_set** out);

/* ---- codec ---- */

typedef enum womc_encode_status {
  WOMC_ENCODE_OK = 0,
  WOMC_ENCODE_ZERO_PROBABILITY = 1, /* impossible distribution while sampling */
  WOMC_ENCODE_WRITE_VIOLATION = 2   /* codeword would raise a cell */
} womc_encode_status;

typedef struct womc_encode_result {
  womc_encode_status status;
  size_t failure_index;   /* zero_probability: offending index */
  size_t violation_count; /* write_violation: number of raised cells */
  uint32_t attempts_used;
  size_t flips;           /* success: cells written 1 -> 0 */
} womc_encode_result;

/* state: n_cells bytes; message: message_length bytes; codeword_out: n_cells
 * bytes, written only on WOMC_ENCODE_OK. A failed encode (after retries)
 * still returns WOMC_OK with result->status describing the failure. */
WOMC_API womc_status womc_encode(const womc_model* model, const womc_set* set,
                                 const uint8_t* state, const uint8_t* message,
                                 uint64_t seed, uint32_t max_attempts,
                                 int greedy, uint8_t* codeword_out,
                                 womc_encode_result* result);
/* message_out: message_length bytes. Deterministic; needs no seed. */
WOMC_API womc_status womc_decode(const womc_set* set, const uint8_t* codeword,
                                 uint8_t* message_out);
/* Counts positions with before=0, after=1. Zero means admissible. */
WOMC_API womc_status womc_validate_write(const uint8_t* before,
                                         const uint8_t* after, size_t n,
                                         size_t* violation_count);

/* ---- simulation ---- */

typedef struct womc_report {
  size_t n_cells;
  double s;
  double t;
  double rate;
  double capacity;
  uint64_t trials;
  uint64_t successes;
  uint64_t zero_prob_failures;
  uint64_t violations;
  double flip_mean;
  double flip_stderr;
  double seconds;
  uint64_t decode_mismatches;
} womc_report;

WOMC_API womc_status womc_run_experiment(const womc_model* model,
                                         const womc_set* set, uint64_t trials,
                                         uint64_t seed, womc_report* out);

/* out_reports must hold schedule_len entries. params supplies the per-write
 * construction policy (mode must be WOMC_SELECT_TARGET_RATE). */
WOMC_API womc_status womc_run_multiwrite(const double* t_schedule,
                                         size_t schedule_len, uint32_t log2_n,
                                         uint64_t trials, uint64_t seed,
                                         const womc_construct_params* params,
                                         womc_report* out_reports);

typedef struct womc_tv_report {
  size_t n_cells;
  double tv;
  double bound;
} womc_tv_report;

/* Exact total-variation comparison; set size limited to N <= 8. */
WOMC_API womc_status womc_tv_exact(const womc_model* model, const womc_set* set,
                                   womc_tv_report* out);

/* Serialized report tables. *out is malloc'd; free with womc_string_free.
 * With include_timing = 0 the seconds column reads 0 and reruns are
 * byte-identical. */
WOMC_API womc_status womc_reports_to_csv(const womc_report* reports,
                                         size_t count, int include_timing,
                                         char** out);
WOMC_API womc_status womc_reports_to_json(const womc_report* reports,
                                          size_t count, int include_timing,
                                          char** out);
WOMC_API void womc_string_free(char* s);

/* ---- bit-sequence files ---- */

/* One line of '0'/'1' characters, newline-terminated. *out_bits is malloc'd;
 * free with womc_bits_free. */
WOMC_API womc_status womc_bits_read_file(const char* path, uint8_t** out_bits,
                                         size_t* out_len);
WOMC_API womc_status womc_bits_write_file(const char* path, const uint8_t* bits,
                                          size_t len);
WOMC_API void womc_bits_free(uint8_t* bits);

/* ---- self checks ---- */

typedef void (*womc_check_callback)(const char* name, int passed,
                                    const char* detail, void* user);

/* Runs the oracle-backed correctness checks (transform involution, chain
 * rule, entropy conservation, total-variation bound). Returns WOMC_OK even
 * when checks fail; *all_passed reports the verdict. */
WOMC_API womc_status womc_self_check(uint32_t max_log2_n,
                                     womc_check_callback callback, void* user,
                                     int* all_passed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* WOMC_H */
