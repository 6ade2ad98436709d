#ifndef BAIRE_BAIRE_H
#define BAIRE_BAIRE_H

/* C interface: opaque handles, integer status codes, thread-local error text. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum baire_status {
  BAIRE_OK = 0,
  BAIRE_INTERNAL = 1,
  BAIRE_VALIDATION = 2,
  BAIRE_CERTIFICATE = 3,
  BAIRE_BUDGET = 4,
  BAIRE_ARGUMENT = 5
} baire_status;

typedef struct baire_composition baire_composition;

const char* baire_version(void);
/* Message for the last failing call on this thread; empty when none. */
const char* baire_last_error(void);
/* Frees strings returned through out-parameters. */
void baire_string_free(char* s);

/* Writes manifest.txt, certs/ and wlog.txt under out_dir. budget < 0 uses the input header. */
int baire_build(const char* input_path, long long budget, const char* out_dir, char** summary_out);
/* mode: folner | transitive | faithful | equivariance | all. *report_out is set even on failure. */
int baire_verify(const char* manifest_path, const char* mode, size_t depth, size_t pairs, char** report_out);
int baire_schreier(const char* manifest_path, size_t points, const char* const* generators, size_t count,
                   char** dot_out);

int baire_composition_open(const char* input_text, baire_composition** out);
void baire_composition_close(baire_composition* c);
int baire_composition_run(baire_composition* c, size_t budget);
/* Text of the k-th point of the root registry. */
int baire_composition_point(baire_composition* c, size_t k, char** out);
/* Image of a point (text form) under a word such as "v0:(1;0) e0^-1". */
int baire_composition_apply(baire_composition* c, const char* word, const char* point, char** out);
/* Ledger lines "v<id> <element> : <chain>", then an audit line over `samples` points.
   *out is set even when the audit fails. */
int baire_composition_ledger(baire_composition* c, size_t samples, char** out);

#ifdef __cplusplus
}
#endif

#endif
