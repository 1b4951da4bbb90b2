/* C ABI for the cfft library: cyclotomic FFT plans over GF(2^m) and
 * Reed-Solomon errors-and-erasures decoders.
 *
 * Handles are opaque; release them with the matching *_free function.
 * Every entry point returns a CfftStatus; on failure a thread-local
 * message is available through cfft_last_error.
 *
 * Kept in sync with cfft-ffi/src/lib.rs (cbindgen.toml describes the
 * generation settings). */

#ifndef CFFT_H
#define CFFT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum CfftStatus {
  CFFT_STATUS_OK = 0,
  CFFT_STATUS_NULL_ARGUMENT = 1,
  CFFT_STATUS_INVALID_ARGUMENT = 2,
  CFFT_STATUS_NOT_PRIMITIVE = 3,
  CFFT_STATUS_UNSUPPORTED = 4,
  CFFT_STATUS_DECODE_FAILURE = 5,
} CfftStatus;

/* Opaque GF(2^m) context. */
typedef struct cfft_field cfft_field;

/* Opaque decoder with its prebuilt transform plans. */
typedef struct cfft_decoder cfft_decoder;

/* Opaque reduced transform plan. */
typedef struct cfft_plan cfft_plan;

/* Copies the most recent error message for this thread into buf
 * (truncated, always NUL-terminated). Returns the full message length.
 * buf may be NULL to query the length. */
size_t cfft_last_error(uint8_t *buf, size_t len);

/* Creates a GF(2^m) context. prim_poly = 0 selects the shipped default
 * polynomial for the degree. */
CfftStatus cfft_field_new(uint32_t m, uint32_t prim_poly, cfft_field **out);

void cfft_field_free(cfft_field *field);

/* Multiplicative group order 2^m - 1, or 0 on null input. */
uint32_t cfft_field_order(const cfft_field *field);

/* Product of two elements in polynomial-basis representation. */
uint16_t cfft_field_mul(const cfft_field *field, uint16_t a, uint16_t b);

/* Builds a reduced transform plan for a task over the (n, k) code.
 * variant: 0 = direct, 1 = symmetric.
 * task: 0 syndromes, 1 chien, 2 evaluator, 3 even locator half,
 *       4 odd half direct, 5 odd half scaled. */
CfftStatus cfft_plan_build(const cfft_field *field,
                           uint32_t variant,
                           uint32_t task,
                           uint32_t n,
                           uint32_t k,
                           cfft_plan **out);

void cfft_plan_free(cfft_plan *plan);

/* Surviving multiplications (non-one constants) of the plan. */
uint32_t cfft_plan_mult_count(const cfft_plan *plan);

/* Popcount-based additive work of the plan (before subexpression
 * sharing). */
uint32_t cfft_plan_add_count(const cfft_plan *plan);

/* Creates a decoder for the (n, k) code over the field; builds all
 * plans. */
CfftStatus cfft_decoder_new(const cfft_field *field,
                            uint32_t n,
                            uint32_t k,
                            cfft_decoder **out);

void cfft_decoder_free(cfft_decoder *dec);

/* Systematic encode: reads k message symbols, writes n codeword
 * symbols. */
CfftStatus cfft_encode(const cfft_decoder *dec,
                       const uint16_t *msg,
                       uint16_t *out_codeword);

/* Errors-and-erasures decode. Reads n received symbols plus n_erasures
 * erasure positions; writes the corrected codeword (length n) and the
 * number of corrected errata. time_domain = 0 uses the transform-domain
 * pipeline. Returns CFFT_STATUS_DECODE_FAILURE when the pattern is
 * flagged uncorrectable. erasures may be NULL when n_erasures is 0. */
CfftStatus cfft_decode(const cfft_decoder *dec,
                       const uint16_t *received,
                       const uint32_t *erasures,
                       uint32_t n_erasures,
                       uint8_t time_domain,
                       uint16_t *out_codeword,
                       uint32_t *out_errata_count);

/* Syndromes S_0 .. S_(2t-1) of a received word through the partial
 * plan; out_syndromes must hold n - k values. */
CfftStatus cfft_syndromes(const cfft_decoder *dec,
                          const uint16_t *received,
                          uint16_t *out_syndromes);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* CFFT_H */
