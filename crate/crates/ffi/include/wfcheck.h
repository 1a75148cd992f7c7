#ifndef WFCHECK_H
#define WFCHECK_H

#pragma once

/* Generated by cbindgen from wfcheck-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Conclusion of an invariant check, mirroring the CLI exit codes.
 */
typedef enum WfConclusion {
  WF_CONCLUSION_TERMINATING = 0,
  WF_CONCLUSION_INVALID_INVARIANT = 1,
  WF_CONCLUSION_NONTERMINATING = 2,
} WfConclusion;

/**
 * Status code for every FFI call.
 */
typedef enum WfStatus {
  WF_STATUS_OK = 0,
  WF_STATUS_NULL_POINTER = 1,
  WF_STATUS_PARSE_ERROR = 2,
  WF_STATUS_STATE_NOT_IN_DOMAIN = 3,
  WF_STATUS_CAP_EXCEEDED = 4,
  WF_STATUS_BUDGET_EXCEEDED = 5,
  WF_STATUS_NOT_WELL_FOUNDED = 6,
  WF_STATUS_NOT_DETERMINISTIC = 7,
  WF_STATUS_NOT_BOUNDED = 8,
  WF_STATUS_VALUE_OVERFLOW = 9,
  WF_STATUS_NOT_FOUND = 10,
  WF_STATUS_OTHER_ERROR = 11,
} WfStatus;

/**
 * Opaque relation handle.
 */
typedef struct WfRelation WfRelation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *wf_last_error_message(void);

/**
 * Parses a relation from the CLI's line format (`domain:` header plus
 * one `x y` edge per line). On success the new handle is written to
 * `out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
enum WfStatus wf_relation_parse(const char *text, struct WfRelation **out);

/**
 * Releases a relation handle. Null is accepted and ignored.
 *
 * # Safety
 * `r` must have come from this library and not be freed twice.
 */
void wf_relation_free(struct WfRelation *r);

/**
 * Number of states in the domain.
 *
 * # Safety
 * `r` must be a live handle.
 */
size_t wf_relation_state_count(const struct WfRelation *r);

/**
 * Number of edges.
 *
 * # Safety
 * `r` must be a live handle.
 */
size_t wf_relation_edge_count(const struct WfRelation *r);

/**
 * Writes the transitive closure of `r` to `out` as a fresh handle.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum WfStatus wf_relation_transitive_closure(const struct WfRelation *r, struct WfRelation **out);

/**
 * Sets `out` to 1 when the relation admits no infinite decreasing
 * sequence (equivalently, has no cycle), else 0.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum WfStatus wf_relation_is_well_founded(const struct WfRelation *r, uint8_t *out);

/**
 * Sets `out` to 1 when the relation is H-well-founded (no infinite
 * decreasing transitive sequence; on finite domains, irreflexive).
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum WfStatus wf_relation_is_h_well_founded(const struct WfRelation *r, uint8_t *out);

/**
 * Length (element count) of the longest decreasing sequence from
 * `start`.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum WfStatus wf_relation_longest_decreasing(const struct WfRelation *r,
                                             uint64_t start,
                                             uint64_t *out);

/**
 * Checks whether `f(x) = x + 1` evaluated over the domain is a bound;
 * sets `out` to 1 when every decreasing sequence from a has at most
 * a + 1 elements.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum WfStatus wf_relation_is_f0_bounded(const struct WfRelation *r, uint8_t *out);

/**
 * Runs the transition-invariant check: `initial` lists the initial
 * states of the system over `r`, and `parts` the candidate invariant.
 *
 * # Safety
 * All pointers must be valid for their stated lengths; every relation
 * handle must be live.
 */
enum WfStatus wf_check_invariant(const struct WfRelation *r,
                                 const uint64_t *initial,
                                 size_t initial_len,
                                 const struct WfRelation *const *parts,
                                 size_t parts_len,
                                 enum WfConclusion *out);

/**
 * Evaluates F_n(x) under the given budget. Fails with `ValueOverflow`
 * when the exact value does not fit in 64 bits.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum WfStatus wf_fgh(uint32_t n,
                     uint64_t x,
                     uint64_t max_result_bits,
                     uint64_t max_recursive_steps,
                     uint64_t *out);

/**
 * Sets `out` to 1 when the listed set is k-large.
 *
 * # Safety
 * `elements` must be valid for `len` reads and `out` a valid pointer.
 */
enum WfStatus wf_is_k_large(const uint64_t *elements, size_t len, uint32_t k, uint8_t *out);

/**
 * WW_m(x): least y <= cap with (x, y] m-w-dense.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum WfStatus wf_ww(uint32_t m, uint64_t x, uint64_t cap, uint64_t *out);

/**
 * HH_m(x): least y <= cap with (x, y] m-dense.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum WfStatus wf_hh(uint32_t m, uint64_t x, uint64_t cap, uint64_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WFCHECK_H */
