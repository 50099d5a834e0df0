#ifndef TWISTR_H
#define TWISTR_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define TWISTR_OK 0

#define TWISTR_ERR_NULL_POINTER 1

#define TWISTR_ERR_INVALID_ARGUMENT 2

#define TWISTR_ERR_UNSUPPORTED 3

#define TWISTR_ERR_DEGENERATE 4

#define TWISTR_ERR_CONTRACT 5

#define TWISTR_ERR_IO 6

#define TWISTR_ERR_OUT_OF_RANGE 7

#define TWISTR_ERR_PANIC 8

#define TWISTR_FAMILY_A2EVEN 0

#define TWISTR_FAMILY_A2ODD 1

#define TWISTR_FAMILY_D2 2

/**
 * Opaque tensor product graph with its eigenvalue table.
 */
typedef struct TwistrGraph TwistrGraph;

/**
 * Opaque solved R-matrix at one sample point.
 */
typedef struct TwistrRMatrix TwistrRMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *twistr_version(void);

/**
 * Message of the last failed call on this thread, or null. The string is
 * owned by the library and valid until the next call on this thread.
 */
const char *twistr_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void twistr_string_free(char *s);

/**
 * Builds the tensor product graph of the pair `(p, q)`: `(k, r)` for the
 * A-families and `(a, b)` for D2.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
int32_t twistr_graph_new(int32_t family_code,
                         size_t l,
                         size_t p,
                         size_t q,
                         struct TwistrGraph **out);

/**
 * # Safety
 * `g` must be null or a graph from `twistr_graph_new`, freed once.
 */
void twistr_graph_free(struct TwistrGraph *g);

/**
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_graph_node_count(const struct TwistrGraph *g, size_t *out);

/**
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_graph_edge_count(const struct TwistrGraph *g, size_t *out);

/**
 * Endpoints of edge `i`; node 0 is the top component.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_graph_edge(const struct TwistrGraph *g, size_t i, size_t *from, size_t *to);

/**
 * Highest-weight label of node `i`, e.g. `"λ₁+λ₂"`.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_graph_node_label(const struct TwistrGraph *g, size_t i, char **out);

/**
 * Parity of node `i`, `+1` or `-1`.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_graph_node_parity(const struct TwistrGraph *g, size_t i, int8_t *out);

/**
 * Eigenvalue of node `i` as a bracket product, e.g. `"⟨2⟩₋·⟨5⟩₊"`.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_graph_eigenvalue(const struct TwistrGraph *g, size_t i, char **out);

/**
 * Eigenvalue of node `i` at rational `w` (with `q = w^4`) and `u`.
 *
 * # Safety
 * Pointers must be valid; `w` and `u` are nul-terminated rationals like `"2/3"`.
 */
int32_t twistr_graph_eigenvalue_at(const struct TwistrGraph *g,
                                   size_t i,
                                   const char *w,
                                   const char *u,
                                   char **out);

/**
 * Graphviz rendering of the graph.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_graph_to_dot(const struct TwistrGraph *g, char **out);

/**
 * Solves the Jimbo equations for the seed representation of the family at
 * rational `w` and `u`.
 *
 * # Safety
 * Pointers must be valid; `w` and `u` are nul-terminated rationals.
 */
int32_t twistr_rmatrix_solve(int32_t family_code,
                             size_t l,
                             const char *w,
                             const char *u,
                             struct TwistrRMatrix **out);

/**
 * # Safety
 * `m` must be null or a matrix from `twistr_rmatrix_solve`, freed once.
 */
void twistr_rmatrix_free(struct TwistrRMatrix *m);

/**
 * Side length of the square matrix.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_rmatrix_dimension(const struct TwistrRMatrix *m, size_t *out);

/**
 * Entry `(row, col)` of `R(u)` as an exact rational string.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_rmatrix_entry(const struct TwistrRMatrix *m, size_t row, size_t col, char **out);

/**
 * Number of nonzero entries of `R(u)`.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_rmatrix_nnz(const struct TwistrRMatrix *m, size_t *out);

/**
 * JSON export of the solve, sparse triplets with string scalars.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_rmatrix_to_json(const struct TwistrRMatrix *m, char **out);

/**
 * Runs the full verification pipeline and returns the summary report.
 * `passed` is set to 1 when no stage failed.
 *
 * # Safety
 * Pointers must be valid.
 */
int32_t twistr_verify(int32_t family_code,
                      size_t l,
                      size_t p,
                      size_t q,
                      uint64_t seed,
                      size_t samples,
                      int32_t *passed,
                      char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWISTR_H */
