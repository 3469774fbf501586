#ifndef TRISQRT_H
#define TRISQRT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values are stable.
 */
typedef enum {
  TRISQRT_STATUS_OK = 0,
  TRISQRT_STATUS_NULL_POINTER = 1,
  TRISQRT_STATUS_INVALID_UTF8 = 2,
  TRISQRT_STATUS_BUFFER_TOO_SMALL = 3,
  TRISQRT_STATUS_INVALID_INPUT = 10,
  TRISQRT_STATUS_NOT_ORDINARY = 11,
  TRISQRT_STATUS_NON_SPLIT_FIELD = 12,
  TRISQRT_STATUS_RING_MISMATCH = 13,
  TRISQRT_STATUS_INSUFFICIENT_PRECISION = 14,
  TRISQRT_STATUS_SINGULAR_SYSTEM = 15,
  TRISQRT_STATUS_PRECISION_EXHAUSTED = 16,
  TRISQRT_STATUS_WEIGHT_TOO_SMALL = 17,
  TRISQRT_STATUS_IRREDUCIBLE_DEGREE_TOO_HIGH = 18,
  TRISQRT_STATUS_UNCERTIFIED_FACTORIZATION = 19,
  TRISQRT_STATUS_NOT_A_FIELD = 20,
  TRISQRT_STATUS_DIVISION_BY_NON_UNIT = 21,
  TRISQRT_STATUS_CLOSURE_VIOLATION = 22,
  TRISQRT_STATUS_PANIC = 99,
} TrisqrtStatus;

/**
 * Opaque evaluation point (p, M, k, l, m, form, E_p sign).
 */
typedef struct TrisqrtConfig TrisqrtConfig;

/**
 * Opaque integer q-expansion.
 */
typedef struct TrisqrtQExp TrisqrtQExp;

/**
 * Opaque verification report.
 */
typedef struct TrisqrtReport TrisqrtReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; valid until the next failing call.
 */
const char *trisqrt_last_error(void);

/**
 * Library version string (static).
 */
const char *trisqrt_version(void);

/**
 * New configuration; the form index defaults to 0 and the E_p sign to minus.
 */
TrisqrtStatus trisqrt_config_new(uint64_t p,
                                 uint32_t precision,
                                 uint32_t k,
                                 uint32_t l,
                                 uint32_t m,
                                 TrisqrtConfig **out);

TrisqrtStatus trisqrt_config_set_form(TrisqrtConfig *cfg, size_t index);

/**
 * `plus` nonzero selects the flipped sign of the α_2 a_p p^{−k} term.
 */
TrisqrtStatus trisqrt_config_set_ep_sign(TrisqrtConfig *cfg, int32_t plus);

void trisqrt_config_free(TrisqrtConfig *cfg);

/**
 * Run both sides at `cfg`. On failure `*out` is left null and the message names the stage.
 */
TrisqrtStatus trisqrt_verify(const TrisqrtConfig *cfg, TrisqrtReport **out);

/**
 * 1 if D ≡ H(P)·K(P)·ρ at the stated precision, 0 if not, −1 on a null handle.
 */
int32_t trisqrt_report_verdict(const TrisqrtReport *r);

/**
 * The full report as JSON (schema 1); owned by the report.
 */
const char *trisqrt_report_json(const TrisqrtReport *r);

void trisqrt_report_free(TrisqrtReport *r);

/**
 * Δ to `n_max` terms.
 */
TrisqrtStatus trisqrt_qexp_delta(size_t n_max, TrisqrtQExp **out);

size_t trisqrt_qexp_len(const TrisqrtQExp *f);

/**
 * Decimal string of a(n) into a caller buffer.
 */
TrisqrtStatus trisqrt_qexp_coeff(const TrisqrtQExp *f,
                                 size_t n,
                                 char *buf,
                                 size_t len,
                                 size_t *needed);

void trisqrt_qexp_free(TrisqrtQExp *f);

/**
 * Unit root α_1 of X² − a_p X + p^{k−1} mod p^M, with a_p given in decimal.
 */
TrisqrtStatus trisqrt_hensel_unit_root(const char *a_p,
                                       uint64_t p,
                                       uint32_t k,
                                       uint32_t precision,
                                       char *buf,
                                       size_t len,
                                       size_t *needed);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TRISQRT_H */
