#ifndef RETAINRW_H
#define RETAINRW_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RrwOutcome {
  RRW_OUTCOME_PROVED = 0,
  RRW_OUTCOME_NOT_PROVED = 1,
  RRW_OUTCOME_STEP_LIMIT = 2,
} RrwOutcome;

typedef enum RrwStatus {
  RRW_STATUS_OK = 0,
  RRW_STATUS_NULL_POINTER = 1,
  RRW_STATUS_INVALID_UTF8 = 2,
  RRW_STATUS_PARSE_ERROR = 3,
  RRW_STATUS_RULE_ERROR = 4,
  RRW_STATUS_PANIC = 5,
} RrwStatus;

/**
 * A loaded rule set with its evaluators.
 */
typedef struct RrwEngine RrwEngine;

/**
 * The outcome of one proof attempt.
 */
typedef struct RrwReport RrwReport;

typedef struct RrwConfig {
  uint64_t step_limit;
  uint64_t backchain_depth;
  bool side_conditions;
  bool fast_alist;
} RrwConfig;

typedef struct RrwStats {
  uint64_t rewrite_calls;
  uint64_t rule_attempts;
  uint64_t rule_applications;
  uint64_t nodes_created;
  uint64_t shadow_probes;
  uint64_t alist_node_visits;
  bool step_limit_hit;
} RrwStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. Valid
 * until the next call into this library on the same thread.
 */
const char *rrw_last_error(void);

struct RrwConfig rrw_config_default(void);

/**
 * Loads rule-file text into a new engine stored in `*out`.
 *
 * # Safety
 * `rules` must be a nul-terminated string and `out` a valid pointer.
 */
enum RrwStatus rrw_engine_load(const char *rules, struct RrwEngine **out);

/**
 * # Safety
 * `engine` must come from [`rrw_engine_load`] and not be used afterwards.
 */
void rrw_engine_free(struct RrwEngine *engine);

/**
 * Number of rewrite rules, or 0 for null.
 *
 * # Safety
 * `engine` must be null or a live engine.
 */
size_t rrw_engine_rule_count(const struct RrwEngine *engine);

/**
 * Attempts to prove `conjecture`. `cfg` may be null for defaults.
 *
 * # Safety
 * Pointers must be valid; `conjecture` nul-terminated.
 */
enum RrwStatus rrw_prove(const struct RrwEngine *engine,
                         const char *conjecture,
                         const struct RrwConfig *cfg,
                         struct RrwReport **out);

/**
 * Rewrites `term` under the known `facts` (a possibly empty list of
 * terms, e.g. `"(integerp x) (integerp y)"`, or null). The result text
 * goes to `*out` and must be released with [`rrw_string_free`].
 *
 * # Safety
 * Pointers must be valid; strings nul-terminated.
 */
enum RrwStatus rrw_rewrite(const struct RrwEngine *engine,
                           const char *term,
                           const char *facts,
                           const struct RrwConfig *cfg,
                           char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void rrw_string_free(char *s);

/**
 * # Safety
 * `report` must be a live report.
 */
enum RrwOutcome rrw_report_outcome(const struct RrwReport *report);

/**
 * The final term; owned by the report.
 *
 * # Safety
 * `report` must be null or a live report.
 */
const char *rrw_report_result(const struct RrwReport *report);

/**
 * # Safety
 * `report` must be null or a live report.
 */
struct RrwStats rrw_report_stats(const struct RrwReport *report);

/**
 * # Safety
 * `report` must come from [`rrw_prove`] and not be used afterwards.
 */
void rrw_report_free(struct RrwReport *report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RETAINRW_H */
