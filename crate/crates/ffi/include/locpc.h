#ifndef LOCPC_H
#define LOCPC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LocpcDataKind {
  LOCPC_DATA_KIND_CONTINUOUS = 0,
  LOCPC_DATA_KIND_BINARY = 1,
} LocpcDataKind;

typedef enum LocpcMark {
  LOCPC_MARK_UNDIRECTED = 0,
  /*
   From the first endpoint to the second.
   */
  LOCPC_MARK_DIRECTED = 1,
  LOCPC_MARK_DOUBLE_BAR = 2,
} LocpcMark;

typedef enum LocpcStatus {
  LOCPC_STATUS_OK = 0,
  LOCPC_STATUS_NULL_POINTER = 1,
  LOCPC_STATUS_INVALID_ARGUMENT = 2,
  LOCPC_STATUS_PARSE = 3,
  LOCPC_STATUS_GRAPH = 4,
  LOCPC_STATUS_CI = 5,
  LOCPC_STATUS_PANIC = 6,
} LocpcStatus;

typedef enum LocpcStopReason {
  LOCPC_STOP_REASON_TREATMENT_NON_ADJACENT = 0,
  LOCPC_STOP_REASON_TREATMENT_IS_CHILD = 1,
  LOCPC_STOP_REASON_ALL_ORIENTED = 2,
  LOCPC_STOP_REASON_NOC_TRIGGERED = 3,
  LOCPC_STOP_REASON_EXHAUSTED = 4,
} LocpcStopReason;

/*
 Directed acyclic graph.
 */
typedef struct LocpcDag LocpcDag;

/*
 Local essential graph.
 */
typedef struct LocpcLeg LocpcLeg;

/*
 Outcome of a direct-effect identification run.
 */
typedef struct LocpcReport LocpcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *locpc_last_error(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must come from this library and not have been freed already.
 */
void locpc_string_free(char *s);

/*
 Empty DAG on `n` nodes.

 # Safety
 `out` must be a valid pointer.
 */
enum LocpcStatus locpc_dag_new(size_t n, struct LocpcDag **out);

/*
 Parses the `dag <n>` / `i -> j` text format.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LocpcStatus locpc_dag_parse(const char *text, struct LocpcDag **out);

/*
 Adds `a -> b`; fails on out-of-range nodes, duplicates and cycles.

 # Safety
 `dag` must be a live handle.
 */
enum LocpcStatus locpc_dag_add_edge(struct LocpcDag *dag, size_t a, size_t b);

/*
 # Safety
 `dag` must be a live handle.
 */
size_t locpc_dag_node_count(const struct LocpcDag *dag);

/*
 # Safety
 `dag` must be null or a handle not yet freed.
 */
void locpc_dag_free(struct LocpcDag *dag);

/*
 Local essential graph of `target` at depth `hop`, built from the DAG.

 # Safety
 `dag` must be a live handle and `out` a valid pointer.
 */
enum LocpcStatus locpc_true_leg(const struct LocpcDag *dag,
                                size_t target,
                                size_t hop,
                                struct LocpcLeg **out);

/*
 Local essential graph learned by local PC with d-separation in the DAG
 answering the independence queries.

 # Safety
 `dag` must be a live handle and `out` a valid pointer.
 */
enum LocpcStatus locpc_oracle_loc_pc(const struct LocpcDag *dag,
                                     size_t target,
                                     size_t hop,
                                     struct LocpcLeg **out);

/*
 # Safety
 `leg` must be a live handle.
 */
size_t locpc_leg_edge_count(const struct LocpcLeg *leg);

/*
 Edge `index` in listing order. Directed edges point from `a` to `b`;
 other edges have `a < b`.

 # Safety
 `leg` must be a live handle and the output pointers valid.
 */
enum LocpcStatus locpc_leg_edge(const struct LocpcLeg *leg,
                                size_t index,
                                size_t *a,
                                size_t *b,
                                enum LocpcMark *mark);

/*
 Text rendering of the graph; release with [`locpc_string_free`].

 # Safety
 `leg` must be a live handle and `out` a valid pointer.
 */
enum LocpcStatus locpc_leg_to_string(const struct LocpcLeg *leg, char **out);

/*
 # Safety
 `leg` must be null or a handle not yet freed.
 */
void locpc_leg_free(struct LocpcLeg *leg);

/*
 Decides identifiability of the direct effect of `x` on `y`, answering
 independence queries by d-separation in the DAG.

 # Safety
 `dag` must be a live handle and `out` a valid pointer.
 */
enum LocpcStatus locpc_oracle_cde(const struct LocpcDag *dag,
                                  size_t x,
                                  size_t y,
                                  struct LocpcReport **out);

/*
 Same decision from data. `values` holds `n_vars * n_samples` numbers,
 one variable after another. Continuous data uses Fisher's z test and
 binary data the G-squared test, both at level `alpha`.

 # Safety
 `values` must point to `n_vars * n_samples` readable doubles and `out`
 must be a valid pointer.
 */
enum LocpcStatus locpc_data_cde(const double *values,
                                size_t n_vars,
                                size_t n_samples,
                                enum LocpcDataKind kind,
                                double alpha,
                                size_t x,
                                size_t y,
                                struct LocpcReport **out);

/*
 # Safety
 `report` must be a live handle.
 */
bool locpc_report_identifiable(const struct LocpcReport *report);

/*
 # Safety
 `report` must be a live handle.
 */
size_t locpc_report_hops_used(const struct LocpcReport *report);

/*
 # Safety
 `report` must be a live handle.
 */
uint64_t locpc_report_ci_count(const struct LocpcReport *report);

/*
 # Safety
 `report` must be a live handle and `out` a valid pointer.
 */
enum LocpcStatus locpc_report_stop_reason(const struct LocpcReport *report,
                                          enum LocpcStopReason *out);

/*
 Size of the adjustment set; 0 when the effect is not identifiable.

 # Safety
 `report` must be a live handle.
 */
size_t locpc_report_adjustment_len(const struct LocpcReport *report);

/*
 Copies up to `cap` adjustment-set members, in increasing order, into
 `buf` and returns how many were written.

 # Safety
 `report` must be a live handle and `buf` must have room for `cap` values.
 */
size_t locpc_report_adjustment_set(const struct LocpcReport *report, size_t *buf, size_t cap);

/*
 Copy of the final local graph of the run.

 # Safety
 `report` must be a live handle and `out` a valid pointer.
 */
enum LocpcStatus locpc_report_leg(const struct LocpcReport *report, struct LocpcLeg **out);

/*
 # Safety
 `report` must be null or a handle not yet freed.
 */
void locpc_report_free(struct LocpcReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOCPC_H */
