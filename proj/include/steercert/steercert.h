#ifndef STEERCERT_H
#define STEERCERT_H

/* C interface to libsteercert.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every function returning sc_status leaves a message retrievable with
 * sc_last_error() on failure; the message is per thread and stays valid
 * until the next failing call on that thread.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SC_API __declspec(dllexport)
#else
#define SC_API __attribute__((visibility("default")))
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_INVALID_ARGUMENT = 1,
  SC_ERR_DIMENSION = 2,
  SC_ERR_VALIDATION = 3,
  SC_ERR_PARSE = 4,
  SC_ERR_IO = 5,
  SC_ERR_CONVERGENCE = 6,
  SC_ERR_NUMERICAL = 7,
  SC_ERR_UNSUPPORTED_LEVEL = 8,
  SC_ERR_SOLVER_UNKNOWN = 9,
  SC_ERR_INTERNAL = 10
} sc_status;

/* Outcome of a check, matching the command-line exit codes. */
typedef enum sc_outcome {
  SC_PASS = 0,         /* valid / quantum-certified / parent exists / LHS model found */
  SC_NEGATIVE = 1,     /* invalid / postquantum / no LHS model */
  SC_INCONCLUSIVE = 2  /* inconclusive verdict or solver Unknown */
} sc_outcome;

typedef struct sc_solver_config {
  double eps_feas;
  double eps_gap;
  int max_iters;
} sc_solver_config;

typedef struct sc_assemblage sc_assemblage;
typedef struct sc_report sc_report;

SC_API const char* sc_version(void);
SC_API const char* sc_last_error(void);
SC_API const char* sc_status_name(sc_status s);
SC_API sc_solver_config sc_default_config(void);

/* Assemblages */
SC_API sc_status sc_assemblage_load(const char* path, sc_assemblage** out);
SC_API sc_status sc_assemblage_from_json(const char* text, sc_assemblage** out);
/* name: "pr", "abb1", "abb-pqnl", "abb-ptp1" */
SC_API sc_status sc_assemblage_fixture(const char* name, sc_assemblage** out);
/* kind: "white", "ghz", "w". like == NULL selects one Alice with two binary
 * settings and two qubit Bobs; otherwise the noise takes like's scenario. */
SC_API sc_status sc_assemblage_noise(const char* kind, const sc_assemblage* like,
                                     sc_assemblage** out);
/* rational != 0 writes exact "p/q" entries. *out is freed with sc_string_free. */
SC_API sc_status sc_assemblage_to_json(const sc_assemblage* a, int rational, char** out);
SC_API sc_status sc_assemblage_save(const sc_assemblage* a, const char* path, int rational);
SC_API size_t sc_assemblage_num_alices(const sc_assemblage* a);
SC_API size_t sc_assemblage_num_bobs(const sc_assemblage* a);
SC_API void sc_assemblage_free(sc_assemblage* a);

/* Checks. On SC_OK *out holds a report. cfg may be NULL for defaults. */
SC_API sc_status sc_validate(const sc_assemblage* a, sc_report** out);
SC_API sc_status sc_lambda(const sc_assemblage* a, const sc_solver_config* cfg, sc_report** out);
SC_API sc_status sc_certify(const sc_assemblage* a, int npa_level, const sc_solver_config* cfg,
                            sc_report** out);
SC_API sc_status sc_lhs(const sc_assemblage* a, const sc_solver_config* cfg, sc_report** out);
/* SC_NEGATIVE when the input itself has no parent (r* > 0). */
SC_API sc_status sc_robustness(const sc_assemblage* a, const sc_assemblage* noise,
                               const char* noise_label, const sc_solver_config* cfg,
                               sc_report** out);
SC_API sc_status sc_hierarchy(const sc_assemblage* a, int level, const sc_solver_config* cfg,
                              sc_report** out);
/* Realisation document with Bob measurements; reports the best CHSH value
 * over the four sign patterns. SC_PASS when it exceeds the classical bound. */
SC_API sc_status sc_chsh(const char* realization_path, sc_report** out);

/* Export the parent-state program in SDPA sparse format. */
SC_API sc_status sc_write_lambda_sdpa(const sc_assemblage* a, const char* path);

/* Reports */
SC_API sc_outcome sc_report_outcome(const sc_report* r);
/* Headline number: t*, r*, margin or CHSH value depending on the check. */
SC_API double sc_report_value(const sc_report* r);
/* Wall-clock time spent in the check. Not part of the JSON so reports stay
 * byte-identical between runs. */
SC_API double sc_report_seconds(const sc_report* r);
/* Owned by the report. */
SC_API const char* sc_report_json(const sc_report* r);
SC_API const char* sc_report_summary(const sc_report* r);
SC_API void sc_report_free(sc_report* r);

SC_API void sc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
