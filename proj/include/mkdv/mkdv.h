/* mkdv.h -- C interface to the mKdV hierarchy engine.
 *
 * Opaque session handles, integer status codes, JSON/CSV strings for
 * structured data.  Strings returned through char** outputs are owned by
 * the caller and must be released with mkdv_string_free().
 *
 * All functions are safe to call from multiple threads on distinct
 * sessions; a single session serialises internally where needed.
 */
#ifndef MKDV_MKDV_H
#define MKDV_MKDV_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mkdv_session mkdv_session;

typedef enum mkdv_status {
    MKDV_OK = 0,
    MKDV_ERR_INVALID_ARG = 1,   /* bad rank/exponent/config */
    MKDV_ERR_NOT_EXACT = 2,     /* antiderivative does not exist */
    MKDV_ERR_UNSOLVABLE = 3,    /* linear solve failed */
    MKDV_ERR_NOT_IN_IMAGE = 4,  /* Miura rewrite impossible */
    MKDV_ERR_CHECK_FAILED = 5,  /* a symbolic check has nonzero residual */
    MKDV_ERR_NUMERIC = 6,       /* NaN/overflow during integration */
    MKDV_ERR_DRIFT = 7,         /* conservation drift above threshold */
    MKDV_ERR_INTERNAL = 8
} mkdv_status;

const char* mkdv_version(void);
const char* mkdv_status_name(mkdv_status s);

/* rank >= 1 selects the algebra A_rank^(1); returns NULL on a bad rank. */
mkdv_session* mkdv_session_new(int rank);
void mkdv_session_free(mkdv_session* s);

int mkdv_rank(const mkdv_session* s);
/* 1 when n indexes a flow of the hierarchy (n >= 1, not divisible by
 * rank+1), else 0.  Usable without a session via rank argument. */
int mkdv_exponent_valid(int rank, int n);

/* Message describing the most recent failure on this session. */
const char* mkdv_last_error(const mkdv_session* s);

/* The n-th flow at truncation degree `degree` (pass 0 for the default
 * n + 3).  JSON: {"algebra", "n", "rhs": [...]}. */
mkdv_status mkdv_flow_json(mkdv_session* s, int n, int degree, char** out);
mkdv_status mkdv_flow_latex(mkdv_session* s, int n, int degree, char** out);

/* Hamiltonian densities: H_n, and H_{n,m} when m > 0. */
mkdv_status mkdv_density_json(mkdv_session* s, int n, int m, int degree,
                              char** out);

/* Dressing data (graded log M components and the h_j). */
mkdv_status mkdv_dressing_json(mkdv_session* s, int degree, char** out);

/* Run the symbolic check suite.  options_json (may be NULL or "{}"):
 *   {"flows": [1,3,5], "degree": 8, "checks": ["zero_curvature", ...],
 *    "perturb_flow": 0}
 * The report is produced even when checks fail; the status is
 * MKDV_ERR_CHECK_FAILED in that case. */
mkdv_status mkdv_check_json(mkdv_session* s, const char* options_json,
                            char** report);

/* Integrate a flow numerically and monitor density drift.
 * options_json:
 *   {"flow": 3, "degree": 6, "grid_n": 256, "length": 20.0, "dt": 1e-4,
 *    "steps": 10000, "stride": 100, "profile": "sech:amplitude=1,width=1",
 *    "densities": [1,3], "drift_threshold": 1e-6}
 * trajectory_csv may be NULL when the trajectory is not wanted. */
mkdv_status mkdv_simulate_json(mkdv_session* s, const char* options_json,
                               char** report, char** trajectory_csv);

void mkdv_string_free(char* p);

#ifdef __cplusplus
}
#endif

#endif
