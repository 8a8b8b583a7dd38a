#ifndef PRYMGRAPH_H
#define PRYMGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_ARGUMENT = 1,
  PG_STATUS_INVALID_UTF8 = 2,
  PG_STATUS_JSON = 3,
  /**
   * Input parsed but failed validation.
   */
  PG_STATUS_INVALID = 4,
  PG_STATUS_PARAMETER = 5,
  PG_STATUS_UNSTABLE = 6,
  PG_STATUS_AMBIENT_MISMATCH = 7,
  /**
   * A Rust panic was caught.
   */
  PG_STATUS_INTERNAL = 8,
} PgStatus;

/**
 * Opaque weighted graph.
 */
typedef struct PgGraph PgGraph;

/**
 * Opaque Prym structure.
 */
typedef struct PgPrym PgPrym;

/**
 * Parameters of the gluing maps, as in `GluingParams`.
 */
typedef struct PgGluingParams {
  uint32_t g;
  uint32_t i;
  uint32_t r1;
  uint32_t r2;
  uint32_t x;
  uint32_t r;
  uint32_t m;
} PgGluingParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call on the same thread.
 */
const char *pg_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void pg_string_free(char *s);

/**
 * Parses a graph from JSON. Structural problems are reported by
 * [`pg_graph_validate`], not here.
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` writable.
 */
enum PgStatus pg_graph_from_json(const char *json, struct PgGraph **out);

/**
 * # Safety
 * `g` must come from this library and not be freed twice.
 */
void pg_graph_free(struct PgGraph *g);

/**
 * Writes the validation report as JSON; returns `Invalid` if it is
 * nonempty.
 *
 * # Safety
 * `g` must be a live handle, `report` writable.
 */
enum PgStatus pg_graph_validate(const struct PgGraph *g, char **report);

/**
 * Arithmetic genus.
 *
 * # Safety
 * `g` must be a live handle, `out` writable.
 */
enum PgStatus pg_graph_genus(const struct PgGraph *g, uint64_t *out);

/**
 * Canonical code as a string; equal codes mean isomorphic graphs.
 *
 * # Safety
 * `g` must be a live handle, `out` writable.
 */
enum PgStatus pg_graph_canonical_code(const struct PgGraph *g, char **out);

/**
 * JSON list of the Prym structures over `g`.
 *
 * # Safety
 * `g` must be a live handle, `out` writable.
 */
enum PgStatus pg_enumerate_covers(const struct PgGraph *g, bool ramified, char **out);

/**
 * Parses and validates a Prym structure: a morphism JSON or an object
 * holding one under `morphism`.
 *
 * # Safety
 * `json` must be a NUL-terminated string, `out` writable.
 */
enum PgStatus pg_prym_from_json(const char *json, struct PgPrym **out);

/**
 * # Safety
 * `p` must come from this library and not be freed twice.
 */
void pg_prym_free(struct PgPrym *p);

/**
 * # Safety
 * `p` must be a live handle, `out` writable.
 */
enum PgStatus pg_prym_to_json(const struct PgPrym *p, char **out);

/**
 * # Safety
 * `p` must be a live handle, `out` writable.
 */
enum PgStatus pg_prym_codimension(const struct PgPrym *p, uintptr_t *out);

/**
 * Stratum descriptor (factors, dimensions) as JSON.
 *
 * # Safety
 * `p` must be a live handle, `out` writable.
 */
enum PgStatus pg_prym_stratum(const struct PgPrym *p, char **out);

/**
 * Builds gluing map `kind` (1 to 6), or the two-elliptic gluing for
 * kind 0 from `g` and `m`.
 *
 * # Safety
 * `params` must be readable, `out` writable.
 */
enum PgStatus pg_build_gluing(uint8_t kind,
                              const struct PgGluingParams *params,
                              struct PgPrym **out);

/**
 * JSON list of strata of the `m`-pointed space up to `max_codim`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PgStatus pg_enumerate_strata(uint32_t genus, uint32_t m, uintptr_t max_codim, char **out);

/**
 * Pullback of the second class along the first gluing map, as JSON.
 *
 * # Safety
 * `a` and `b` must be live handles, `out` writable.
 */
enum PgStatus pg_pullback(const struct PgPrym *a, const struct PgPrym *b, char **out);

/**
 * First Chern class of the normal bundle, in text form.
 *
 * # Safety
 * `p` must be a live handle, `out` writable.
 */
enum PgStatus pg_normal_bundle(const struct PgPrym *p, char **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PgStatus pg_nontaut_bound(int64_t genus, uint32_t *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PgStatus pg_cusp_dim_gamma12(int64_t weight, uint64_t *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PgStatus pg_eichler_shimura_dim(int64_t weight, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRYMGRAPH_H */
