/* episim - metapopulation simulator for coupled disease and awareness
 * spreading over mobility and call matrices.
 *
 * C interface to the shared library. All objects are opaque handles created
 * and destroyed by the library; every fallible call returns an episim_status
 * and a thread-local message is available from episim_last_error().
 */

#ifndef EPISIM_H
#define EPISIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef EPISIM_EXPORTS
#    define EPISIM_API __declspec(dllexport)
#  else
#    define EPISIM_API __declspec(dllimport)
#  endif
#else
#  define EPISIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum episim_status {
  EPISIM_OK = 0,
  EPISIM_ERR_INVALID_ARGUMENT = 1, /* null handle, bad enum/range */
  EPISIM_ERR_VALIDATION = 2,       /* scenario or matrix invariant violated */
  EPISIM_ERR_IO = 3,               /* file missing, malformed, or unwritable */
  EPISIM_ERR_NO_CONVERGENCE = 4,   /* iterative method hit its budget */
  EPISIM_ERR_INTERNAL = 5
} episim_status;

typedef struct episim_matrix episim_matrix;     /* row-stochastic flow matrix */
typedef struct episim_ranking episim_ranking;   /* centrality scores + order */
typedef struct episim_scenario episim_scenario; /* loaded scenario config */
typedef struct episim_result episim_result;     /* trajectory + summary */

/* Library version string, e.g. "0.1.0". */
EPISIM_API const char* episim_version(void);

/* Message for the last failing call on this thread; empty string if none. */
EPISIM_API const char* episim_last_error(void);

/* Frees strings returned through char** out-parameters. */
EPISIM_API void episim_string_free(char* s);

/* --- matrices ------------------------------------------------------------ */

/* kind: "identity" | "uniform" | "hub" | "diagonal-dominant". */
EPISIM_API episim_status episim_matrix_synth(const char* kind, size_t n,
                                             double diag_weight, uint64_t seed,
                                             episim_matrix** out);

/* Reads/writes the matrix CSV format (metadata block, label header row,
 * matrix rows). Reading validates row stochasticity. */
EPISIM_API episim_status episim_matrix_read(const char* path, episim_matrix** out);
EPISIM_API episim_status episim_matrix_write(const episim_matrix* m, const char* path);

/* Builders over the record CSV formats. max_gap > 0 breaks mobility
 * transition chains when the timestamp gap exceeds it; 0 means no limit. */
EPISIM_API episim_status episim_matrix_from_calls_csv(const char* path, size_t n,
                                                      episim_matrix** out);
EPISIM_API episim_status episim_matrix_from_trajectories_csv(const char* path, size_t n,
                                                             int64_t max_gap,
                                                             episim_matrix** out);

/* Cuts all flow into and out of the target subpopulations. */
EPISIM_API episim_status episim_matrix_quarantine(const episim_matrix* m,
                                                  const size_t* targets, size_t count,
                                                  episim_matrix** out);

EPISIM_API size_t episim_matrix_dim(const episim_matrix* m);
EPISIM_API double episim_matrix_entry(const episim_matrix* m, size_t i, size_t j);
EPISIM_API void episim_matrix_free(episim_matrix* m);

/* --- centrality ----------------------------------------------------------- */

/* kind: "degree" | "closeness" | "betweenness" | "eigenvector". */
EPISIM_API episim_status episim_centrality(const episim_matrix* m, const char* kind,
                                           episim_ranking** out);
EPISIM_API size_t episim_ranking_size(const episim_ranking* r);
/* Node id at the given rank (0 = highest score). */
EPISIM_API size_t episim_ranking_node(const episim_ranking* r, size_t rank);
EPISIM_API double episim_ranking_score(const episim_ranking* r, size_t node);
/* Writes node_id,score,rank CSV. */
EPISIM_API episim_status episim_ranking_write(const episim_ranking* r, const char* path);
EPISIM_API void episim_ranking_free(episim_ranking* r);

/* --- scenarios ------------------------------------------------------------ */

/* Loads the JSON scenario config. Matrix invariant violations do not fail
 * the load; they surface through episim_scenario_validate. */
EPISIM_API episim_status episim_scenario_read(const char* path, episim_scenario** out);

/* On success *out_report is NULL (no violations) or a newline-joined list
 * owned by the caller (episim_string_free); *out_count is the number of
 * violations. */
EPISIM_API episim_status episim_scenario_validate(const episim_scenario* s,
                                                  char** out_report, size_t* out_count);

/* Command-line style overrides. engine: "deterministic" | "stochastic". */
EPISIM_API episim_status episim_scenario_set_engine(episim_scenario* s, const char* engine);
EPISIM_API episim_status episim_scenario_set_seed(episim_scenario* s, uint64_t seed);
EPISIM_API episim_status episim_scenario_set_replicas(episim_scenario* s, unsigned replicas);
EPISIM_API unsigned episim_scenario_replicas(const episim_scenario* s);
EPISIM_API void episim_scenario_free(episim_scenario* s);

/* --- runs ------------------------------------------------------------------ */

/* Validates and runs one replica. Replicas share the seeding draws (identical
 * initial state); dynamics streams are derived per replica. */
EPISIM_API episim_status episim_run(const episim_scenario* s, unsigned replica,
                                    episim_result** out);

/* stationary is 0/1; i_inf and tau are NaN when not stationary. Any output
 * pointer may be NULL. */
EPISIM_API episim_status episim_result_summary(const episim_result* r, double* i_inf,
                                               double* tau, int* stationary, double* r0);
EPISIM_API size_t episim_result_steps(const episim_result* r); /* recorded states - 1 */
EPISIM_API size_t episim_result_dim(const episim_result* r);
/* compartment: 'S', 'I', 'R', 'A' or 'U'. */
EPISIM_API double episim_result_value(const episim_result* r, size_t t, size_t subpop,
                                      char compartment);
/* Writes t,subpop,S,I,R,A,U CSV. */
EPISIM_API episim_status episim_result_write_trajectory(const episim_result* r,
                                                        const char* path);
/* Writes replica,i_inf,tau,stationary,r0 CSV, one row per result. */
EPISIM_API episim_status episim_results_write_summary(const episim_result* const* results,
                                                      size_t count, const char* path);
EPISIM_API void episim_result_free(episim_result* r);

/* --- sweeps ----------------------------------------------------------------- */

/* Runs the sweep section of the scenario file and writes heatmap*.csv /
 * r0_curve.csv into out_dir (created if needed). */
EPISIM_API episim_status episim_sweep(const episim_scenario* s, const char* out_dir,
                                      unsigned threads);

#ifdef __cplusplus
}
#endif

#endif /* EPISIM_H */
