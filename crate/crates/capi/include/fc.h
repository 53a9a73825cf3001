#ifndef FC_CAPI_H
#define FC_CAPI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status and verdict codes shared by every call.
 */
typedef enum FcStatus {
  /**
   * Success; for claim verdicts: certified.
   */
  FcStatusOk = 0,
  /**
   * Claim verdict: failed.
   */
  FcStatusFailed = 1,
  /**
   * Claim verdict: not reached (caps hit or fast mode).
   */
  FcStatusNotReached = 2,
  /**
   * Bad pointer, unknown name, or invalid numeric input.
   */
  FcStatusInvalidArgument = 3,
  /**
   * Evaluation error (domain violation, singular correlation, ...).
   */
  FcStatusNumericError = 4,
} FcStatus;

/**
 * Opaque claim report handle.
 */
typedef struct FcReport FcReport;

/**
 * Closed interval with finite endpoints.
 */
typedef struct FcInterval {
  double lo;
  double hi;
} FcInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Enclosure of the standard normal upper tail over `[lo, hi]`.
 *
 * # Safety
 * `out` must be a valid pointer to an `FcInterval`.
 */
enum FcStatus fc_normal_tail(double lo, double hi, struct FcInterval *out);

/**
 * Orthant probability `f(beta, alpha)` at the given gamma.
 *
 * # Safety
 * `out` must be a valid pointer to an `FcInterval`.
 */
enum FcStatus fc_f_eval(double gamma,
                        double beta,
                        double alpha,
                        int certified,
                        struct FcInterval *out);

/**
 * First-moment functional `F1(alpha)`.
 *
 * # Safety
 * `out` must be a valid pointer to an `FcInterval`.
 */
enum FcStatus fc_f1_eval(double gamma, double alpha, int certified, struct FcInterval *out);

/**
 * Second-moment functional `F2(beta, alpha1, alpha2)`.
 *
 * # Safety
 * `out` must be a valid pointer to an `FcInterval`.
 */
enum FcStatus fc_f2_eval(double gamma,
                         double beta,
                         double alpha1,
                         double alpha2,
                         int certified,
                         struct FcInterval *out);

/**
 * Fixed-point iteration to the critical point of `F1`; writes the
 * near-maximizer and the independently evaluated derivative residual.
 *
 * # Safety
 * `alpha_star` and `residual` must be valid pointers.
 */
enum FcStatus fc_fixed_point_alpha(double gamma,
                                   double alpha0,
                                   double tol,
                                   uintptr_t max_iter,
                                   double *alpha_star,
                                   double *residual);

/**
 * Certify the bracket on the critical constant. Returns a handle or null.
 */
struct FcReport *fc_run_gamma_bounds(int certified);

/**
 * Run one claim by name: "claim-b1", "claim-b2", "claim-b3" or "claim-b4".
 * `smoke != 0` uses the 50-segment subset for the sweep claims.
 *
 * # Safety
 * `claim` must be a valid nul-terminated string or null.
 */
struct FcReport *fc_run_claim(const char *claim, int certified, uintptr_t parallelism, int smoke);

/**
 * Verdict of a finished claim run.
 *
 * # Safety
 * `report` must be a live handle from a run function, or null.
 */
enum FcStatus fc_report_verdict(const struct FcReport *report);

/**
 * Number of segments checked by the run.
 *
 * # Safety
 * `report` must be a live handle from a run function, or null.
 */
uintptr_t fc_report_segments(const struct FcReport *report);

/**
 * Full report as a JSON document (schema fc-report/1); release with
 * `fc_string_free`.
 *
 * # Safety
 * `report` must be a live handle from a run function, or null.
 */
char *fc_report_json(const struct FcReport *report);

/**
 * Release a report handle.
 *
 * # Safety
 * `report` must be a handle from a run function (released once) or null.
 */
void fc_report_free(struct FcReport *report);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be a string returned by this library (released once) or null.
 */
void fc_string_free(char *s);

/**
 * Static version string; do not free.
 */
const char *fc_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FC_CAPI_H */
