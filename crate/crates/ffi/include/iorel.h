#ifndef IOREL_H
#define IOREL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define IOREL_POL_S 0

#define IOREL_POL_P 1

#define IOREL_SIDE_0 0

#define IOREL_SIDE_N 1

typedef enum IorelStatus {
  IOREL_STATUS_OK = 0,
  IOREL_STATUS_NULL_POINTER = 1,
  IOREL_STATUS_INVALID_ARGUMENT = 2,
  IOREL_STATUS_PARSE = 3,
  IOREL_STATUS_VALIDATION = 4,
  IOREL_STATUS_REGIME = 5,
  IOREL_STATUS_NUMERICAL = 6,
  IOREL_STATUS_IO = 7,
  IOREL_STATUS_PANIC = 8,
} IorelStatus;

/**
 * Opaque stack handle.
 */
typedef struct IorelStack IorelStack;

typedef struct IorelComplex {
  double re;
  double im;
} IorelComplex;

/**
 * Generalized reflection and transmission of the whole stack.
 */
typedef struct IorelCoefficients {
  struct IorelComplex r0n;
  struct IorelComplex t0n;
  struct IorelComplex rn0;
  struct IorelComplex tn0;
} IorelCoefficients;

/**
 * Outer-region commutator coefficients divided by the mode normalization.
 * Index 0 is side 0, index 1 is side n.
 */
typedef struct IorelCommutators {
  double c_in[2];
  double c_out[2];
  struct IorelComplex c_cross;
} IorelCommutators;

/**
 * Intraplate 2x2 commutator matrix of one interior layer and its noise amplitudes.
 */
typedef struct IorelIntraplate {
  struct IorelComplex c[2][2];
  double xi[2];
} IorelIntraplate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *iorel_version(void);

/**
 * Message of the last failed call on this thread, or null after a success.
 *
 * The pointer stays valid until the next library call on the same thread.
 */
const char *iorel_last_error(void);

/**
 * Parse a stack from TOML text. On success `*out` owns a new handle.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a writable pointer.
 */
enum IorelStatus iorel_stack_from_toml(const char *toml, struct IorelStack **out);

/**
 * Read and parse a stack file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum IorelStatus iorel_stack_from_file(const char *path, struct IorelStack **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `stack` must be null or a handle not previously freed.
 */
void iorel_stack_free(struct IorelStack *stack);

/**
 * Number of interfaces n (regions are 0..=n, interior layers 1..n-1).
 *
 * # Safety
 * `stack` must be a live handle and `out` writable.
 */
enum IorelStatus iorel_stack_interfaces(const struct IorelStack *stack, size_t *out);

/**
 * Generalized outer coefficients at (omega in rad/s, k in 1/m).
 *
 * # Safety
 * `stack` must be a live handle and `out` writable.
 */
enum IorelStatus iorel_coefficients(const struct IorelStack *stack,
                                    double omega,
                                    double k,
                                    uint32_t pol,
                                    struct IorelCoefficients *out);

/**
 * Outer-region commutator coefficients.
 *
 * # Safety
 * `stack` must be a live handle and `out` writable.
 */
enum IorelStatus iorel_commutators(const struct IorelStack *stack,
                                   double omega,
                                   double k,
                                   uint32_t pol,
                                   struct IorelCommutators *out);

/**
 * Intraplate matrix of interior layer `layer` (1 <= layer < n).
 *
 * # Safety
 * `stack` must be a live handle and `out` writable.
 */
enum IorelStatus iorel_intraplate(const struct IorelStack *stack,
                                  double omega,
                                  double k,
                                  uint32_t pol,
                                  size_t layer,
                                  struct IorelIntraplate *out);

/**
 * Thermal emission into side `side` at temperature `temperature` in kelvin.
 *
 * # Safety
 * `stack` must be a live handle and `out` writable.
 */
enum IorelStatus iorel_emission(const struct IorelStack *stack,
                                double omega,
                                double k,
                                uint32_t pol,
                                double temperature,
                                uint32_t side,
                                double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* IOREL_H */
