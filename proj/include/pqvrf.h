#ifndef PQVRF_H
#define PQVRF_H

/* C interface to libpqvrf. Every call returns a pqvrf_status; handles are
 * opaque and freed with their matching *_free. On failure,
 * pqvrf_last_error() describes what went wrong on the calling thread; after
 * a PQVRF_REJECT from pqvrf_verify it holds the reject reason. */

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define PQVRF_API __attribute__((visibility("default")))
#else
#define PQVRF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  PQVRF_OK = 0,
  PQVRF_REJECT = 1,
  PQVRF_ERR_ARGUMENT = 2,
  PQVRF_ERR_FORMAT = 3,
  PQVRF_ERR_VERSION = 4,
  PQVRF_ERR_KEY = 5,
  PQVRF_ERR_CONFIG = 6,
  PQVRF_ERR_INTERNAL = 7
} pqvrf_status;

PQVRF_API const char* pqvrf_version(void);
PQVRF_API const char* pqvrf_status_name(pqvrf_status status);
PQVRF_API const char* pqvrf_last_error(void);

/* Owned byte string. */
typedef struct pqvrf_bytes pqvrf_bytes;
PQVRF_API const uint8_t* pqvrf_bytes_data(const pqvrf_bytes* b);
PQVRF_API size_t pqvrf_bytes_size(const pqvrf_bytes* b);
PQVRF_API void pqvrf_bytes_free(pqvrf_bytes* b);

/* Proof modes by name: "zkboo", "zkb++" (or "zkbpp"). */

/* ---- VRF ---- */

typedef struct pqvrf_keypair pqvrf_keypair;
typedef struct pqvrf_public_key pqvrf_public_key;
typedef struct pqvrf_evaluation pqvrf_evaluation;

PQVRF_API pqvrf_status pqvrf_keygen(const uint8_t* seed, size_t seed_len, pqvrf_keypair** out);
/* Loads a key pair from its two JSON files' contents. */
PQVRF_API pqvrf_status pqvrf_keypair_load(const char* public_json, const char* secret_json, pqvrf_keypair** out);
PQVRF_API pqvrf_status pqvrf_keypair_public_json(const pqvrf_keypair* kp, pqvrf_bytes** out);
PQVRF_API pqvrf_status pqvrf_keypair_secret_json(const pqvrf_keypair* kp, pqvrf_bytes** out);
PQVRF_API pqvrf_status pqvrf_keypair_public_key(const pqvrf_keypair* kp, pqvrf_public_key** out);
PQVRF_API void pqvrf_keypair_free(pqvrf_keypair* kp);

PQVRF_API pqvrf_status pqvrf_public_key_load(const char* public_json, pqvrf_public_key** out);
PQVRF_API void pqvrf_public_key_free(pqvrf_public_key* pk);

/* beta = VRF output only, no proof. */
PQVRF_API pqvrf_status pqvrf_output(const pqvrf_keypair* kp, const uint8_t* msg, size_t msg_len, uint8_t beta[32]);

PQVRF_API pqvrf_status pqvrf_eval(const pqvrf_keypair* kp, const uint8_t* msg, size_t msg_len, const uint8_t* seed,
                        size_t seed_len, uint32_t rounds, const char* mode, unsigned threads,
                        pqvrf_evaluation** out);
PQVRF_API pqvrf_status pqvrf_evaluation_serialize(const pqvrf_evaluation* ev, pqvrf_bytes** out);
PQVRF_API pqvrf_status pqvrf_evaluation_load(const uint8_t* data, size_t len, pqvrf_evaluation** out);
PQVRF_API pqvrf_status pqvrf_evaluation_beta(const pqvrf_evaluation* ev, uint8_t beta[32]);
/* Serialized size of the embedded equality proof alone. */
PQVRF_API size_t pqvrf_evaluation_proof_size(const pqvrf_evaluation* ev);
PQVRF_API void pqvrf_evaluation_free(pqvrf_evaluation* ev);

/* PQVRF_OK on accept, PQVRF_REJECT otherwise (reason in pqvrf_last_error). */
PQVRF_API pqvrf_status pqvrf_verify(const pqvrf_public_key* pk, const uint8_t* msg, size_t msg_len,
                          const pqvrf_evaluation* ev, unsigned threads);

/* ---- Random beacon ---- */

typedef struct {
  uint32_t n;
  uint32_t t;
  uint32_t rounds;
  const uint32_t* byzantine; /* server ids in 1..n */
  size_t byzantine_len;
  const char* behavior; /* "silent", "corrupt-value", "equivocate" */
  int bft_sizing;       /* also require n >= 3f+1 and t >= f */
  uint64_t seed;
  const uint8_t* sd0; /* 32 bytes, or NULL for the hash of "genesis" */
} pqvrf_beacon_params;

typedef struct pqvrf_beacon pqvrf_beacon;

PQVRF_API void pqvrf_beacon_params_default(pqvrf_beacon_params* p);
/* PQVRF_ERR_CONFIG names the violated inequality in pqvrf_last_error. */
PQVRF_API pqvrf_status pqvrf_beacon_validate(const pqvrf_beacon_params* p);
PQVRF_API pqvrf_status pqvrf_beacon_run(const pqvrf_beacon_params* p, pqvrf_beacon** out);
PQVRF_API uint32_t pqvrf_beacon_finalized(const pqvrf_beacon* b);
PQVRF_API pqvrf_status pqvrf_beacon_transcript(const pqvrf_beacon* b, pqvrf_bytes** out); /* JSON lines */
PQVRF_API pqvrf_status pqvrf_beacon_dkg_transcript(const pqvrf_beacon* b, pqvrf_bytes** out); /* JSON lines */
PQVRF_API pqvrf_status pqvrf_beacon_summary(const pqvrf_beacon* b, pqvrf_bytes** out);    /* JSON */
PQVRF_API void pqvrf_beacon_free(pqvrf_beacon* b);

/* ---- Proof-of-stake simulation ---- */

typedef struct {
  uint32_t nodes;
  double alpha;
  uint64_t stake_per_node;
  uint64_t slots;
  uint32_t delta;
  double leaders_per_slot;
  const char* adversary; /* "honest", "withhold", "grind-lite" */
  uint64_t seed;
  uint64_t proof_every; /* 0 disables full proofs */
  uint32_t proof_rounds;
  uint64_t window;
} pqvrf_pos_params;

typedef struct pqvrf_pos pqvrf_pos;

PQVRF_API void pqvrf_pos_params_default(pqvrf_pos_params* p);
/* 1 when alpha >= 1/2. */
PQVRF_API int pqvrf_pos_honest_majority_violated(const pqvrf_pos_params* p);
PQVRF_API pqvrf_status pqvrf_pos_run(const pqvrf_pos_params* p, pqvrf_pos** out);
PQVRF_API pqvrf_status pqvrf_pos_slots_csv(const pqvrf_pos* s, pqvrf_bytes** out);
PQVRF_API pqvrf_status pqvrf_pos_summary(const pqvrf_pos* s, pqvrf_bytes** out); /* JSON */
/* Blocks failing the public eligibility re-check; 0 for a sound run. */
PQVRF_API size_t pqvrf_pos_recheck_failures(const pqvrf_pos* s);
PQVRF_API void pqvrf_pos_free(pqvrf_pos* s);

/* ---- Benchmark ---- */

typedef struct {
  const uint32_t* rounds;
  size_t rounds_len;
  const char* mode; /* "zkboo", "zkb++" or "both" */
  uint32_t reps;
  unsigned threads;
  uint64_t seed;
} pqvrf_bench_params;

/* CSV with header mode,t,op,bytes,ms,reps. */
PQVRF_API pqvrf_status pqvrf_bench(const pqvrf_bench_params* p, pqvrf_bytes** csv);

#ifdef __cplusplus
}
#endif

#endif
