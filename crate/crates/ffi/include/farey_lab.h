#ifndef FAREY_LAB_H
#define FAREY_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum FlStatus {
  FL_STATUS_OK = 0,
  FL_STATUS_NULL_POINTER = 1,
  FL_STATUS_INVALID_UTF8 = 2,
  FL_STATUS_INVALID_JSON = 3,
  FL_STATUS_INVALID_ARGUMENT = 4,
  FL_STATUS_CAP_EXCEEDED = 5,
  FL_STATUS_PANIC = 6,
} FlStatus;

/**
 * Opaque catalog of cycle types.
 */
typedef struct FlCatalog FlCatalog;

/**
 * Opaque undirected simple graph.
 */
typedef struct FlGraph FlGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or NULL if the last call succeeded.
 *
 * The returned string must be released with [`fl_string_free`].
 */
char *fl_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void fl_string_free(char *s);

/**
 * Builds a graph from `edge_count` pairs laid out flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (or be NULL when
 * `edge_count` is 0); `out_graph` must be writable.
 */
enum FlStatus fl_graph_new(size_t vertex_count,
                           const size_t *edges,
                           size_t edge_count,
                           struct FlGraph **out_graph);

/**
 * Parses a graph from `{"vertex_count": n, "edges": [[u, v], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_graph` must be writable.
 */
enum FlStatus fl_graph_from_json(const char *json, struct FlGraph **out_graph);

/**
 * Serialises a graph to JSON. Free the result with [`fl_string_free`].
 *
 * # Safety
 * `graph` must be a live handle; `out_json` must be writable.
 */
enum FlStatus fl_graph_to_json(const struct FlGraph *graph, char **out_json);

/**
 * Releases a graph. NULL is ignored.
 *
 * # Safety
 * `graph` must come from this library and must not be used afterwards.
 */
void fl_graph_free(struct FlGraph *graph);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t fl_graph_vertex_count(const struct FlGraph *graph);

/**
 * Number of edges, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t fl_graph_edge_count(const struct FlGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle; `out_adjacent` must be writable.
 */
enum FlStatus fl_graph_has_edge(const struct FlGraph *graph,
                                size_t u,
                                size_t v,
                                bool *out_adjacent);

/**
 * Builds the Farey graph of the given level (at least 1).
 *
 * # Safety
 * `out_graph` must be writable.
 */
enum FlStatus fl_farey_build(uint32_t level, struct FlGraph **out_graph);

/**
 * Decides membership in the class K.
 *
 * When `out_report` is not NULL it receives the JSON report with its peel or
 * violation witness, to be released with [`fl_string_free`].
 *
 * # Safety
 * `graph` must be a live handle; `out_member` must be writable.
 */
enum FlStatus fl_k_check(const struct FlGraph *graph, bool *out_member, char **out_report);

/**
 * Tests whether the vertex set is strong in the graph.
 *
 * # Safety
 * `set` must point to `set_len` readable ids; `out_strong` must be writable.
 */
enum FlStatus fl_is_strong(const struct FlGraph *graph,
                           const size_t *set,
                           size_t set_len,
                           bool *out_strong);

/**
 * Algebraic closure of a vertex set, written as a JSON array of ids.
 *
 * # Safety
 * `set` must point to `set_len` readable ids; `out_json` must be writable.
 */
enum FlStatus fl_acl(const struct FlGraph *graph,
                     const size_t *set,
                     size_t set_len,
                     char **out_json);

/**
 * Tests whether `b` and `c` are independent over `a`.
 *
 * # Safety
 * Each set pointer must cover its length; `out_independent` must be writable.
 */
enum FlStatus fl_is_independent(const struct FlGraph *graph,
                                const size_t *b,
                                size_t b_len,
                                const size_t *a,
                                size_t a_len,
                                const size_t *c,
                                size_t c_len,
                                bool *out_independent);

/**
 * Amalgamates `b` and `c` over the glue `glue_b[i] ~ glue_c[i]`.
 *
 * With `free_only` the free amalgam is returned; otherwise the result is the
 * amalgam inside K, which requires the glued set to be strong on both sides.
 *
 * # Safety
 * Both glue arrays must hold `glue_len` ids; `out_graph` must be writable.
 */
enum FlStatus fl_amalgamate(const struct FlGraph *b,
                            const struct FlGraph *c,
                            const size_t *glue_b,
                            const size_t *glue_c,
                            size_t glue_len,
                            bool free_only,
                            struct FlGraph **out_graph);

/**
 * Enumerates cycle types with at most `max_vertices` vertices.
 *
 * # Safety
 * `out_catalog` must be writable.
 */
enum FlStatus fl_catalog_new(size_t max_vertices, struct FlCatalog **out_catalog);

/**
 * Releases a catalog. NULL is ignored.
 *
 * # Safety
 * `catalog` must come from this library and must not be used afterwards.
 */
void fl_catalog_free(struct FlCatalog *catalog);

/**
 * Number of cycle types, or 0 for NULL.
 *
 * # Safety
 * `catalog` must be NULL or a live handle.
 */
size_t fl_catalog_len(const struct FlCatalog *catalog);

/**
 * Serialises the catalog to JSON. Free the result with [`fl_string_free`].
 *
 * # Safety
 * `catalog` must be a live handle; `out_json` must be writable.
 */
enum FlStatus fl_catalog_to_json(const struct FlCatalog *catalog, char **out_json);

/**
 * Evaluates `P_C(x, y)` for the cycle type named `type_name`.
 *
 * # Safety
 * Handles must be live, `type_name` NUL-terminated, `out_holds` writable.
 */
enum FlStatus fl_eval_p_c(const struct FlGraph *graph,
                          const struct FlCatalog *catalog,
                          const char *type_name,
                          size_t x,
                          size_t y,
                          bool *out_holds);

/**
 * Evaluates `P_δ(x, y)` for a comma-separated sequence of cycle type names.
 *
 * # Safety
 * Handles must be live, `delta` NUL-terminated, `out_holds` writable.
 */
enum FlStatus fl_eval_p_delta(const struct FlGraph *graph,
                              const struct FlCatalog *catalog,
                              const char *delta,
                              size_t x,
                              size_t y,
                              bool *out_holds);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FAREY_LAB_H */
