/* walkdiv — divisor statistics of Bernoulli random walks.
 *
 * C interface to the shared library. Conventions:
 *   - every fallible call returns a wd_status; outputs are written through
 *     pointers only on WD_OK;
 *   - wd_last_error() describes the most recent failure on this thread;
 *   - objects returned through wd_*_free-able handles own their storage;
 *   - strings returned as char* must be released with wd_string_free.
 */
#ifndef WALKDIV_H
#define WALKDIV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  WD_OK = 0,
  WD_ERR_INVALID = 1,  /* bad argument / usage */
  WD_ERR_RESOURCE = 2, /* guard or work-budget refusal */
  WD_ERR_NOMEM = 3,
  WD_ERR_INTERNAL = 4
} wd_status;

const char *wd_status_name(wd_status s);
const char *wd_last_error(void); /* thread-local; valid until the next failing call */
void wd_string_free(char *s);

/* ---- exact dyadic rationals sign * p / 2^e ---- */

typedef struct wd_dyadic wd_dyadic;

void wd_dyadic_free(wd_dyadic *v);
int wd_dyadic_sign(const wd_dyadic *v);
uint64_t wd_dyadic_exponent(const wd_dyadic *v);
double wd_dyadic_double(const wd_dyadic *v);
char *wd_dyadic_fraction(const wd_dyadic *v); /* "p", "p/2", "p/2^e" */

/* ---- divisibility probabilities of walk partial sums ---- */

wd_status wd_prob_exact(uint64_t d, uint64_t n, wd_dyadic **out);
wd_status wd_joint_exact(uint64_t d, uint64_t n, uint64_t delta, uint64_t m, wd_dyadic **out);
wd_status wd_product_exact(uint64_t bigD, uint64_t n, uint64_t m, wd_dyadic **out);
wd_status wd_correlation_exact(uint64_t d, uint64_t n, uint64_t delta, uint64_t m,
                               wd_dyadic **out);

wd_status wd_prob_trig(uint64_t d, uint64_t n, double *out);
wd_status wd_theta_marginal(uint64_t d, uint64_t n, double tol, double *out);
wd_status wd_joint_trig(uint64_t d, uint64_t n, uint64_t delta, uint64_t m, double *out);
wd_status wd_r_term(uint64_t d, uint64_t n, uint64_t delta, uint64_t m, double *out);
wd_status wd_correlation_trig(uint64_t d, uint64_t n, uint64_t delta, uint64_t m, double *out);

/* ---- integer arithmetic ---- */

wd_status wd_rho_closed(uint64_t k, uint64_t bigD, uint64_t *out);
wd_status wd_rho_brute(uint64_t k, uint64_t bigD, uint64_t *out);
/* {"value":n,"factors":[[p,e],...],"omega":w,"tau":t} */
wd_status wd_factor_json(uint64_t n, char **json_out);
wd_status wd_two_omega_harmonic(uint64_t n_top, double *out);

/* ---- quadratic exponential sums ---- */

wd_status wd_quad_exp_sum(int64_t a, uint64_t q, uint64_t k, uint64_t m_top, double *re,
                          double *im);
wd_status wd_sarkozy_check(int64_t a, uint64_t q, uint64_t k, uint64_t m_top, double *lhs,
                           double *rhs, int *pass);
wd_status wd_complete_sum_identity(uint64_t k, uint64_t bigD, double *value, double *rho_ratio);
/* a_h given as re/im arrays of length len >= n+1 */
wd_status wd_euler_cesaro_gap(const double *re, const double *im, size_t len, uint64_t n,
                              double *sum_re, double *sum_im, double *max_partial, double *ratio);
wd_status wd_euler_central_weight(uint64_t n, double *out);
/* the gap for the centered quadratic-phase family e^{2 i pi a (h^2 + k h)/q} */
wd_status wd_euler_quadratic_gap(int64_t a, uint64_t q, uint64_t k, uint64_t n, double *sum_re,
                                 double *sum_im, double *max_partial, double *ratio);

/* ---- divisor sets and cutoffs ---- */

typedef struct wd_set wd_set;
/* "all" | "primes" | "squarefree" | "prog:a,q" | "list:v1,v2,..." */
wd_status wd_set_parse(const char *spec, wd_set **out);
void wd_set_free(wd_set *s);
int wd_set_contains(const wd_set *s, uint64_t d);
/* {"set":"...","bound":b,"members":[...]} — members <= bound, ascending */
wd_status wd_set_members_json(const wd_set *s, double bound, char **json_out);

#define WD_CUTOFF_THETA 0   /* admit d <= n^value */
#define WD_CUTOFF_ETA_SQRT 1 /* admit d < value * sqrt(n / log n) */
typedef struct {
  int kind;
  double value;
} wd_cutoff;

wd_status wd_mean_divisor_sum_exact(uint64_t n_top, wd_cutoff cutoff, const wd_set *set,
                                    wd_dyadic **out);
wd_status wd_mean_divisor_sum_main(uint64_t n_top, wd_cutoff cutoff, const wd_set *set,
                                   double *out);
wd_status wd_increment_second_moment(uint64_t i, uint64_t j, wd_cutoff cutoff, const wd_set *set,
                                     wd_dyadic **out);
wd_status wd_increment_moment_mc(uint64_t i, uint64_t j, wd_cutoff cutoff, const wd_set *set,
                                 uint64_t walks, uint64_t seed, double eps, uint32_t threads,
                                 double *estimate, double *stderr_out, double *bound_ratio);

/* ---- seeded walk simulation ---- */

typedef struct wd_report wd_report;

/* subseq_spec: "all" | "geom:v0,ratio" | "pow:e" | "list:v1,v2,...".
 * rho_claim < 0 means no growth claim. injected_bits may be NULL.
 * Content is deterministic in (seed, config) regardless of threads. */
wd_status wd_simulate(uint64_t seed, uint64_t steps, wd_cutoff cutoff, const wd_set *set,
                      const char *subseq_spec, double rho_claim, uint32_t walks,
                      uint32_t checkpoints, double eps, uint32_t threads,
                      const uint8_t *injected_bits, size_t injected_len, wd_report **out);
void wd_report_free(wd_report *r);
char *wd_report_json(const wd_report *r);
char *wd_report_csv(const wd_report *r); /* header n,S_n,M_n,error */

/* {"sequence":[...],"growth_check":{"pass":...,"fitted_c":...}} */
wd_status wd_make_subsequence(const char *subseq_spec, double rho_claim, uint64_t limit,
                              char **json_out);

/* ---- inequality checks ---- */

/* id: THETA_UNIFORM | MARGINAL_GAP | MARGINAL_FAST | D_TIMES_P | WEAK_DEP_NEAR |
 *     WEAK_DEP_FAR | DELTA_CONTINUITY | PROD_APPROX | STRONG_DEP_JOINT |
 *     RHO_BOUND | HARMONIC_2OMEGA | INCREMENT_A | INCREMENT_B.
 * grid_json/params_json may be NULL for the defaults. The record is
 * {"id","grid","params","worst_ratio","fitted_constant","pass","witnesses"}. */
wd_status wd_check_inequality(const char *id, const char *grid_json, const char *params_json,
                              char **record_json);

#ifdef __cplusplus
}
#endif

#endif /* WALKDIV_H */
