#ifndef REPX_H
#define REPX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum RepxStatus {
  REPX_STATUS_OK = 0,
  REPX_STATUS_NULL_POINTER = 1,
  REPX_STATUS_INVALID_UTF8 = 2,
  REPX_STATUS_INVALID_INPUT = 3,
  REPX_STATUS_DECOMPOSITION_FAILED = 4,
  REPX_STATUS_NOT_CLOSED = 5,
  REPX_STATUS_OUT_OF_RANGE = 6,
  REPX_STATUS_PANIC = 7,
} RepxStatus;

/**
 * A decomposition into indecomposable summands.
 */
typedef struct RepxDecomposition RepxDecomposition;

/**
 * A graded module over `alpha_p(r, s)`.
 */
typedef struct RepxModule RepxModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. Free with [`repx_string_free`].
 */
char *repx_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void repx_string_free(char *s);

/**
 * Builds the module of a diagram such as `"6,3,2,2/2,1,1,0"`.
 *
 * # Safety
 * `diagram` is a NUL-terminated string and `out` is valid for one write.
 */
enum RepxStatus repx_module_from_diagram(const char *diagram,
                                         uint16_t p,
                                         uint32_t r,
                                         uint32_t s,
                                         struct RepxModule **out);

/**
 * The trivial module `k`.
 *
 * # Safety
 * `out` is valid for one write.
 */
enum RepxStatus repx_module_trivial(uint16_t p, uint32_t r, uint32_t s, struct RepxModule **out);

/**
 * `a ⊗ b`.
 *
 * # Safety
 * `a` and `b` are live module handles and `out` is valid for one write.
 */
enum RepxStatus repx_module_tensor(const struct RepxModule *a,
                                   const struct RepxModule *b,
                                   struct RepxModule **out);

/**
 * The dual module.
 *
 * # Safety
 * `m` is a live module handle and `out` is valid for one write.
 */
enum RepxStatus repx_module_dual(const struct RepxModule *m, struct RepxModule **out);

/**
 * Dimension of the module, or 0 for a null handle.
 *
 * # Safety
 * `m` is null or a live module handle.
 */
size_t repx_module_dim(const struct RepxModule *m);

/**
 * The module as JSON. Free the string with [`repx_string_free`].
 *
 * # Safety
 * `m` is a live module handle and `out` is valid for one write.
 */
enum RepxStatus repx_module_to_json(const struct RepxModule *m, char **out);

/**
 * # Safety
 * `m` is null or a module handle not yet freed.
 */
void repx_module_free(struct RepxModule *m);

/**
 * Decomposes `m`, extending scalars up to `F_{p^ext_cap}` when needed.
 *
 * # Safety
 * `m` is a live module handle and `out` is valid for one write.
 */
enum RepxStatus repx_decompose(const struct RepxModule *m,
                               uint64_t seed,
                               uint32_t ext_cap,
                               struct RepxDecomposition **out);

/**
 * Number of isomorphism classes of summands, or 0 for a null handle.
 *
 * # Safety
 * `d` is null or a live decomposition handle.
 */
size_t repx_decomposition_classes(const struct RepxDecomposition *d);

/**
 * Dimension and multiplicity of summand class `index`.
 *
 * # Safety
 * `d` is a live decomposition handle; `dim` and `multiplicity` are valid for one write.
 */
enum RepxStatus repx_decomposition_summand(const struct RepxDecomposition *d,
                                           size_t index,
                                           size_t *dim,
                                           size_t *multiplicity);

/**
 * Degree of the field the decomposition was computed over, or 0 for a null handle.
 *
 * # Safety
 * `d` is null or a live decomposition handle.
 */
uint32_t repx_decomposition_extension_degree(const struct RepxDecomposition *d);

/**
 * The decomposition as JSON. Free the string with [`repx_string_free`].
 *
 * # Safety
 * `d` is a live decomposition handle and `out` is valid for one write.
 */
enum RepxStatus repx_decomposition_to_json(const struct RepxDecomposition *d, char **out);

/**
 * # Safety
 * `d` is null or a decomposition handle not yet freed.
 */
void repx_decomposition_free(struct RepxDecomposition *d);

/**
 * Multiplication table, as JSON, of the subcategory generated by `k` and the given
 * diagrams, closing up to `cap` objects. Returns `NotClosed` with the table still written
 * when closure was not reached.
 *
 * # Safety
 * `diagrams` points to `count` NUL-terminated strings (it may be null when `count` is 0)
 * and `out` is valid for one write.
 */
enum RepxStatus repx_sstable_json(const char *const *diagrams,
                                  size_t count,
                                  uint16_t p,
                                  uint32_t r,
                                  uint32_t s,
                                  uint64_t seed,
                                  size_t cap,
                                  char **out);

/**
 * `C(j, l) mod p` by Lucas' theorem; `p` must be prime. Returns `u32::MAX` for `p < 2`.
 */
uint32_t repx_binom_mod_p(uint64_t j, uint64_t l, uint32_t p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REPX_H */
