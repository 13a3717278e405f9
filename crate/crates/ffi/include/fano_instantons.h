#ifndef FANO_INSTANTONS_H
#define FANO_INSTANTONS_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// The three threefolds.
typedef enum FiGeometry {
  FiGeometry_Quadric = 0,
  FiGeometry_V5 = 1,
  FiGeometry_V22 = 2,
} FiGeometry;

// Result codes.
typedef enum FiStatus {
  FiStatus_Ok = 0,
  FiStatus_NullPointer = 1,
  FiStatus_InvalidArgument = 2,
  FiStatus_InvalidField = 3,
  FiStatus_Unsupported = 4,
  FiStatus_Dimension = 5,
  FiStatus_Degenerate = 6,
  FiStatus_Exhausted = 7,
  FiStatus_Parse = 8,
  FiStatus_Panic = 9,
} FiStatus;

// A sampled monad with its model and, for nets, the net.
typedef struct FiSample FiSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until
// the next call into the library on the same thread.
const char *fi_last_error(void);

// Library version as a static string.
const char *fi_version(void);

// Samples a monad for `(geometry, k)` over `F_prime` from `seed`.
//
// # Safety
// `out` must be a valid pointer to writable storage for a handle.
enum FiStatus fi_sample_new(enum FiGeometry geometry,
                            uintptr_t k,
                            uint64_t prime,
                            uint64_t seed,
                            struct FiSample **out);

// Parses a sample document.
//
// # Safety
// `json` must be a nul-terminated string; `out` as in [`fi_sample_new`].
enum FiStatus fi_sample_from_json(const char *json, struct FiSample **out);

// Serializes a sample to JSON. Release the string with [`fi_string_free`].
//
// # Safety
// `sample` must be a live handle; `out` must be writable.
enum FiStatus fi_sample_to_json(const struct FiSample *sample, char **out);

// Releases a sample. Null is ignored.
//
// # Safety
// `sample` must be null or a handle not yet freed.
void fi_sample_free(struct FiSample *sample);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void fi_string_free(char *s);

// `dim I` and `dim W` of the sampled monad.
//
// # Safety
// `sample` must be a live handle; the outputs must be writable.
enum FiStatus fi_sample_dims(const struct FiSample *sample, uintptr_t *dim_i, uintptr_t *dim_w);

// Checks the monad at `npoints` points drawn from `seed`.
//
// # Safety
// `sample` must be a live handle; `passed` must be writable.
enum FiStatus fi_sample_validate(const struct FiSample *sample,
                                 uintptr_t npoints,
                                 uint64_t seed,
                                 bool *passed);

// The DD invariant of a quadric sample.
//
// # Safety
// `sample` must be a live handle; `out` must be writable.
enum FiStatus fi_sample_dd(const struct FiSample *sample, uint64_t *out);

// Runs Wall's test on the net of a `V22` sample over `F_2` or `F_3`.
//
// # Safety
// `sample` must be a live handle; `semistable` must be writable.
enum FiStatus fi_sample_semistable(const struct FiSample *sample, bool *semistable);

// Tangent minus orbit dimension over `trials` independent samples. Writes
// the common `δ` (or `-1` if trials disagree) and whether every trial was
// certified at the expected value.
//
// # Safety
// The outputs must be writable.
enum FiStatus fi_delta(enum FiGeometry geometry,
                       uintptr_t k,
                       uintptr_t trials,
                       uint64_t prime,
                       uint64_t seed,
                       int64_t *delta,
                       bool *passed);

// Whether the monad and instanton Hilbert polynomials agree.
//
// # Safety
// `identical` must be writable.
enum FiStatus fi_chi_identical(enum FiGeometry geometry, uintptr_t k, bool *identical);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FANO_INSTANTONS_H */
