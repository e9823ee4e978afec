#ifndef CHH_H
#define CHH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum ChhStatus {
  CHH_STATUS_OK = 0,
  CHH_STATUS_NULL_POINTER = 1,
  CHH_STATUS_INVALID_PARAMS = 2,
  CHH_STATUS_INVALID_CAPACITY = 3,
  CHH_STATUS_INFEASIBLE_SPACE = 4,
  CHH_STATUS_OUT_OF_RANGE = 5,
  CHH_STATUS_UNSUPPORTED = 6,
  CHH_STATUS_PANIC = 7,
} ChhStatus;

/*
 A sketch or exact counter.
 */
typedef struct ChhHandle ChhHandle;

/*
 The result of a query.
 */
typedef struct ChhReportHandle ChhReportHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Static description of a status code. Never null.
 */
const char *chh_status_str(enum ChhStatus status);

/*
 Message of the last failure on this thread, or an empty string. Valid
 until the next failing call on the same thread.
 */
const char *chh_last_error(void);

/*
 Counters `(k1, k2)` for the space-saving algorithm.

 # Safety
 `out_k1` and `out_k2` must be valid for writes.
 */
enum ChhStatus chh_csschh_sizing(double phi1,
                                 double phi2,
                                 double eps1,
                                 double eps2,
                                 uint64_t *out_k1,
                                 uint64_t *out_k2);

/*
 Counters `(s1, s2)` for the Misra-Gries baseline.

 # Safety
 `out_s1` and `out_s2` must be valid for writes.
 */
enum ChhStatus chh_mgchh_sizing(double phi1,
                                double phi2,
                                double eps1,
                                double eps2,
                                uint64_t *out_s1,
                                uint64_t *out_s2);

/*
 Equal-memory counters for both algorithms within `space_bytes`.

 # Safety
 All four outputs must be valid for writes.
 */
enum ChhStatus chh_equal_space(uint64_t space_bytes,
                               uint64_t *out_k1,
                               uint64_t *out_k2,
                               uint64_t *out_s1,
                               uint64_t *out_s2);

/*
 Space-saving sketch sized from error tolerances.

 # Safety
 `out` must be valid for writes.
 */
enum ChhStatus chh_csschh_new(double phi1,
                              double phi2,
                              double eps1,
                              double eps2,
                              struct ChhHandle **out);

/*
 Space-saving sketch with explicit counters.

 # Safety
 `out` must be valid for writes.
 */
enum ChhStatus chh_csschh_with_counters(size_t k1, size_t k2, struct ChhHandle **out);

/*
 Misra-Gries baseline with explicit counters.

 # Safety
 `out` must be valid for writes.
 */
enum ChhStatus chh_mgchh_new(size_t s1, size_t s2, uint64_t seed, struct ChhHandle **out);

/*
 Misra-Gries baseline sized from error tolerances.

 # Safety
 `out` must be valid for writes.
 */
enum ChhStatus chh_mgchh_from_params(double phi1,
                                     double phi2,
                                     double eps1,
                                     double eps2,
                                     uint64_t seed,
                                     struct ChhHandle **out);

/*
 Exact counter. Memory grows with the number of distinct tuples.

 # Safety
 `out` must be valid for writes.
 */
enum ChhStatus chh_exact_new(struct ChhHandle **out);

/*
 Feeds one tuple.

 # Safety
 `h` must be a live handle not used concurrently.
 */
enum ChhStatus chh_update(struct ChhHandle *h, uint64_t x, uint64_t y);

/*
 Feeds `len` tuples `(xs[i], ys[i])` in order.

 # Safety
 `h` must be a live handle; `xs` and `ys` must each point to `len`
 readable values (they may be null when `len` is 0).
 */
enum ChhStatus chh_update_batch(struct ChhHandle *h,
                                const uint64_t *xs,
                                const uint64_t *ys,
                                size_t len);

/*
 Number of tuples fed so far.

 # Safety
 `h` must be a live handle; `out_n` must be valid for writes.
 */
enum ChhStatus chh_processed(const struct ChhHandle *h, uint64_t *out_n);

/*
 Modeled memory in bytes. `CHH_STATUS_UNSUPPORTED` for the exact counter.

 # Safety
 `h` must be a live handle; `out_bytes` must be valid for writes.
 */
enum ChhStatus chh_space_bytes(const struct ChhHandle *h, uint64_t *out_bytes);

/*
 Answers a query; the caller owns the new report.

 # Safety
 `h` must be a live handle; `out_report` must be valid for writes.
 */
enum ChhStatus chh_query(const struct ChhHandle *h,
                         double phi1,
                         double phi2,
                         struct ChhReportHandle **out_report);

/*
 Releases a sketch. Null is a no-op.

 # Safety
 `h` must be null or a handle not yet freed.
 */
void chh_free(struct ChhHandle *h);

/*
 Number of reported primaries; 0 for null.

 # Safety
 `r` must be null or a live report.
 */
size_t chh_report_primary_count(const struct ChhReportHandle *r);

/*
 Reported primary `i`, by decreasing estimate.

 # Safety
 `r` must be a live report; outputs must be valid for writes.
 */
enum ChhStatus chh_report_primary_at(const struct ChhReportHandle *r,
                                     size_t i,
                                     uint64_t *out_item,
                                     uint64_t *out_freq);

/*
 Number of reported correlated heavy hitters; 0 for null.

 # Safety
 `r` must be null or a live report.
 */
size_t chh_report_pair_count(const struct ChhReportHandle *r);

/*
 Reported tuple `i`, grouped by primary.

 # Safety
 `r` must be a live report; outputs must be valid for writes.
 */
enum ChhStatus chh_report_pair_at(const struct ChhReportHandle *r,
                                  size_t i,
                                  uint64_t *out_primary,
                                  uint64_t *out_secondary,
                                  uint64_t *out_freq);

/*
 Releases a report. Null is a no-op.

 # Safety
 `r` must be null or a report not yet freed.
 */
void chh_report_free(struct ChhReportHandle *r);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CHH_H */
