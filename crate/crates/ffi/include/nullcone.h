#ifndef NULLCONE_FFI_H
#define NULLCONE_FFI_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Matrix family of a nullcone ideal.
typedef enum NcFamily {
  NC_FAMILY_PFAFFIAN = 0,
  NC_FAMILY_GENERIC = 1,
  NC_FAMILY_SYMMETRIC = 2,
} NcFamily;

// Status codes returned by every fallible entry point.
typedef enum NcStatus {
  NC_STATUS_OK = 0,
  NC_STATUS_NULL_POINTER = 1,
  NC_STATUS_INVALID_ARGUMENT = 2,
  NC_STATUS_BUDGET_EXCEEDED = 3,
  NC_STATUS_COMPUTATION_FAILED = 4,
  NC_STATUS_PANIC = 5,
} NcStatus;

// Opaque arithmetic-rank certificate.
typedef struct NcCertificate NcCertificate;

// Opaque nullcone ideal over a fixed coefficient field.
typedef struct NcNullcone NcNullcone;

// Closed-form numerics for one parameter point.
typedef struct NcFormulas {
  int64_t height;
  int64_t ara;
  int64_t invariant_ring_dim;
  bool stci;
} NcFormulas;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread.
const char *nc_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void nc_string_free(char *s);

// Height, arithmetic rank, invariant-ring dimension and the STCI flag.
//
// # Safety
// `out` must be null or point to writable memory for one `NcFormulas`.
enum NcStatus nc_formulas(enum NcFamily family,
                          size_t m,
                          size_t t,
                          size_t n,
                          struct NcFormulas *out);

// Builds the nullcone ideal. `field` is `"rational"` or `"p=<prime>"`.
// `m` is ignored outside the generic family.
//
// # Safety
// `field` must be a NUL-terminated string; `out` must be writable.
enum NcStatus nc_nullcone_new(enum NcFamily family,
                              size_t m,
                              size_t t,
                              size_t n,
                              const char *field,
                              struct NcNullcone **out);

// # Safety
// `h` must be null or a handle from [`nc_nullcone_new`] not yet freed.
void nc_nullcone_free(struct NcNullcone *h);

// # Safety
// `h` must be a live handle and `out` writable.
enum NcStatus nc_nullcone_num_generators(const struct NcNullcone *h, size_t *out);

// Generator `index` in the library's text format, as a new string.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum NcStatus nc_nullcone_generator(const struct NcNullcone *h, size_t index, char **out);

// Height of the ideal from a Gröbner basis.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum NcStatus nc_nullcone_height(const struct NcNullcone *h, int64_t *out);

// Samples and verifies an arithmetic-rank certificate with the formula's
// number of generators.
//
// # Safety
// `field` must be a NUL-terminated string; `out` must be writable.
enum NcStatus nc_certify(enum NcFamily family,
                         size_t m,
                         size_t t,
                         size_t n,
                         const char *field,
                         uint64_t seed,
                         struct NcCertificate **out);

// # Safety
// `h` must be null or a handle from [`nc_certify`] not yet freed.
void nc_certificate_free(struct NcCertificate *h);

// # Safety
// `h` must be a live handle and `out` writable.
enum NcStatus nc_certificate_verified(const struct NcCertificate *h, bool *out);

// The full certificate, with its transcript, as a JSON string.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum NcStatus nc_certificate_to_json(const struct NcCertificate *h, char **out);

// Exhaustive point count of a stratum over 𝔽_q, e.g. `space = "Sp"`.
//
// # Safety
// `space` must be a NUL-terminated string; `out` must be writable.
enum NcStatus nc_count_enumerate(const char *space,
                                 size_t m,
                                 size_t t,
                                 size_t n,
                                 size_t k,
                                 uint64_t q,
                                 uint64_t *out);

// Closed-form count as a decimal string (the value may exceed 64 bits).
//
// # Safety
// `space` must be a NUL-terminated string; `out` must be writable.
enum NcStatus nc_count_closed(const char *space,
                              size_t m,
                              size_t t,
                              size_t n,
                              size_t k,
                              uint64_t q,
                              char **out);

// Runs the command-line front end in-process. `argv` excludes the program
// name. The record is written to `out` and the exit code to `exit_code`.
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings; `out` and
// `exit_code` must be writable.
enum NcStatus nc_cli_run(size_t argc, const char *const *argv, char **out, int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NULLCONE_FFI_H */
