#include "pqvrf.h"

#include <cstring>
#include <string>

#include "pqvrf/beacon.hpp"
#include "pqvrf/bench.hpp"
#include "pqvrf/pos_sim.hpp"
#include "pqvrf/vrf.hpp"

using namespace pqvrf;

struct pqvrf_bytes {
  Bytes data;
};
struct pqvrf_keypair {
  VrfKeyMaterial keys;
};
struct pqvrf_public_key {
  VrfPublicKey pk;
};
struct pqvrf_evaluation {
  VrfEvaluation ev;
};
struct pqvrf_beacon {
  BeaconRun run;
};
struct pqvrf_pos {
  PosRun run;
};

namespace {

thread_local std::string g_error;

pqvrf_status fail(pqvrf_status s, std::string what) {
  g_error = std::move(what);
  return s;
}

// Runs fn and maps exceptions onto status codes.
template <typename Fn>
pqvrf_status guard(Fn&& fn) {
  g_error.clear();
  try {
    return fn();
  } catch (const ConfigError& e) {
    return fail(PQVRF_ERR_CONFIG, e.what());
  } catch (const KeyVersionError& e) {
    return fail(PQVRF_ERR_VERSION, e.what());
  } catch (const KeyFormatError& e) {
    return fail(PQVRF_ERR_KEY, e.what());
  } catch (const DecodeError& e) {
    return fail(e.kind() == DecodeFailure::kVersion ? PQVRF_ERR_VERSION : PQVRF_ERR_FORMAT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PQVRF_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PQVRF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PQVRF_ERR_INTERNAL, "unknown error");
  }
}

std::span<const std::uint8_t> span_of(const uint8_t* p, size_t n) {
  if (!p && n) throw std::invalid_argument("null buffer with non-zero length");
  return {p, n};
}

pqvrf_status emit(pqvrf_bytes** out, std::string_view s) {
  if (!out) throw std::invalid_argument("null output pointer");
  *out = new pqvrf_bytes{Bytes(s.begin(), s.end())};
  return PQVRF_OK;
}

template <typename T>
void need(const T* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string("null ") + what);
}

}  // namespace

extern "C" {

const char* pqvrf_version(void) { return "1.0.0"; }

const char* pqvrf_status_name(pqvrf_status s) {
  switch (s) {
    case PQVRF_OK: return "ok";
    case PQVRF_REJECT: return "reject";
    case PQVRF_ERR_ARGUMENT: return "invalid argument";
    case PQVRF_ERR_FORMAT: return "malformed input";
    case PQVRF_ERR_VERSION: return "version mismatch";
    case PQVRF_ERR_KEY: return "bad key";
    case PQVRF_ERR_CONFIG: return "invalid configuration";
    case PQVRF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pqvrf_last_error(void) { return g_error.c_str(); }

const uint8_t* pqvrf_bytes_data(const pqvrf_bytes* b) { return b ? b->data.data() : nullptr; }
size_t pqvrf_bytes_size(const pqvrf_bytes* b) { return b ? b->data.size() : 0; }
void pqvrf_bytes_free(pqvrf_bytes* b) { delete b; }

pqvrf_status pqvrf_keygen(const uint8_t* seed, size_t seed_len, pqvrf_keypair** out) {
  return guard([&] {
    need(out, "output");
    *out = new pqvrf_keypair{vrf_gen(span_of(seed, seed_len))};
    return PQVRF_OK;
  });
}

pqvrf_status pqvrf_keypair_load(const char* public_json, const char* secret_json, pqvrf_keypair** out) {
  return guard([&] {
    need(public_json, "public key");
    need(secret_json, "secret key");
    need(out, "output");
    const VrfPublicKey pk = parse_public_key_json(public_json);
    *out = new pqvrf_keypair{parse_secret_key_json(secret_json, pk)};
    return PQVRF_OK;
  });
}

pqvrf_status pqvrf_keypair_public_json(const pqvrf_keypair* kp, pqvrf_bytes** out) {
  return guard([&] {
    need(kp, "key pair");
    return emit(out, public_key_json(kp->keys.public_key()));
  });
}

pqvrf_status pqvrf_keypair_secret_json(const pqvrf_keypair* kp, pqvrf_bytes** out) {
  return guard([&] {
    need(kp, "key pair");
    return emit(out, secret_key_json(kp->keys));
  });
}

pqvrf_status pqvrf_keypair_public_key(const pqvrf_keypair* kp, pqvrf_public_key** out) {
  return guard([&] {
    need(kp, "key pair");
    need(out, "output");
    *out = new pqvrf_public_key{kp->keys.public_key()};
    return PQVRF_OK;
  });
}

void pqvrf_keypair_free(pqvrf_keypair* kp) { delete kp; }

pqvrf_status pqvrf_public_key_load(const char* public_json, pqvrf_public_key** out) {
  return guard([&] {
    need(public_json, "public key");
    need(out, "output");
    *out = new pqvrf_public_key{parse_public_key_json(public_json)};
    return PQVRF_OK;
  });
}

void pqvrf_public_key_free(pqvrf_public_key* pk) { delete pk; }

pqvrf_status pqvrf_output(const pqvrf_keypair* kp, const uint8_t* msg, size_t msg_len, uint8_t beta[32]) {
  return guard([&] {
    need(kp, "key pair");
    need(beta, "output");
    const Digest b = vrf_output(kp->keys.s, span_of(msg, msg_len));
    std::memcpy(beta, b.data(), b.size());
    return PQVRF_OK;
  });
}

pqvrf_status pqvrf_eval(const pqvrf_keypair* kp, const uint8_t* msg, size_t msg_len, const uint8_t* seed,
                        size_t seed_len, uint32_t rounds, const char* mode, unsigned threads,
                        pqvrf_evaluation** out) {
  return guard([&] {
    need(kp, "key pair");
    need(out, "output");
    if (rounds == 0) throw std::invalid_argument("rounds must be positive");
    VrfOptions opt;
    opt.rounds = rounds;
    opt.mode = mode ? parse_mode(mode) : ProofMode::kZkbpp;
    opt.threads = threads ? threads : 1;
    *out = new pqvrf_evaluation{vrf_eval(kp->keys, span_of(msg, msg_len), span_of(seed, seed_len), opt)};
    return PQVRF_OK;
  });
}

pqvrf_status pqvrf_evaluation_serialize(const pqvrf_evaluation* ev, pqvrf_bytes** out) {
  return guard([&] {
    need(ev, "evaluation");
    need(out, "output");
    *out = new pqvrf_bytes{serialize(ev->ev)};
    return PQVRF_OK;
  });
}

pqvrf_status pqvrf_evaluation_load(const uint8_t* data, size_t len, pqvrf_evaluation** out) {
  return guard([&] {
    need(out, "output");
    *out = new pqvrf_evaluation{deserialize_evaluation(span_of(data, len))};
    return PQVRF_OK;
  });
}

pqvrf_status pqvrf_evaluation_beta(const pqvrf_evaluation* ev, uint8_t beta[32]) {
  return guard([&] {
    need(ev, "evaluation");
    need(beta, "output");
    std::memcpy(beta, ev->ev.beta.data(), 32);
    return PQVRF_OK;
  });
}

size_t pqvrf_evaluation_proof_size(const pqvrf_evaluation* ev) { return ev ? serialize(ev->ev.proof).size() : 0; }

void pqvrf_evaluation_free(pqvrf_evaluation* ev) { delete ev; }

pqvrf_status pqvrf_verify(const pqvrf_public_key* pk, const uint8_t* msg, size_t msg_len,
                          const pqvrf_evaluation* ev, unsigned threads) {
  return guard([&] {
    need(pk, "public key");
    need(ev, "evaluation");
    const VrfVerdict v = vrf_verify(pk->pk, span_of(msg, msg_len), ev->ev, threads ? threads : 1);
    if (v.accepted()) return PQVRF_OK;
    return fail(PQVRF_REJECT, v.describe());
  });
}

void pqvrf_beacon_params_default(pqvrf_beacon_params* p) {
  if (!p) return;
  *p = pqvrf_beacon_params{};
  p->n = 4;
  p->t = 1;
  p->rounds = 10;
  p->behavior = "silent";
}

namespace {

BeaconConfig beacon_config(const pqvrf_beacon_params* p) {
  need(p, "parameters");
  BeaconConfig c;
  c.n = p->n;
  c.t = p->t;
  c.rounds = p->rounds;
  if (p->byzantine_len) {
    need(p->byzantine, "byzantine list");
    c.byzantine.assign(p->byzantine, p->byzantine + p->byzantine_len);
  }
  c.behavior = parse_behavior(p->behavior ? p->behavior : "silent");
  c.bft_sizing = p->bft_sizing != 0;
  c.seed = p->seed;
  if (p->sd0) std::memcpy(c.sd0.data(), p->sd0, 32);
  else c.sd0 = tagged_hash(HashTag::kBeaconRound, as_bytes("genesis"));
  return c;
}

}  // namespace

pqvrf_status pqvrf_beacon_validate(const pqvrf_beacon_params* p) {
  return guard([&] {
    validate(beacon_config(p));
    return PQVRF_OK;
  });
}

pqvrf_status pqvrf_beacon_run(const pqvrf_beacon_params* p, pqvrf_beacon** out) {
  return guard([&] {
    need(out, "output");
    *out = new pqvrf_beacon{run_beacon(beacon_config(p))};
    return PQVRF_OK;
  });
}

uint32_t pqvrf_beacon_finalized(const pqvrf_beacon* b) { return b ? b->run.finalized() : 0; }

pqvrf_status pqvrf_beacon_transcript(const pqvrf_beacon* b, pqvrf_bytes** out) {
  return guard([&] {
    need(b, "beacon");
    return emit(out, b->run.transcript());
  });
}

pqvrf_status pqvrf_beacon_dkg_transcript(const pqvrf_beacon* b, pqvrf_bytes** out) {
  return guard([&] {
    need(b, "beacon");
    return emit(out, dkg_transcript_jsonl(b->run.dkg));
  });
}

pqvrf_status pqvrf_beacon_summary(const pqvrf_beacon* b, pqvrf_bytes** out) {
  return guard([&] {
    need(b, "beacon");
    return emit(out, b->run.summary_json());
  });
}

void pqvrf_beacon_free(pqvrf_beacon* b) { delete b; }

void pqvrf_pos_params_default(pqvrf_pos_params* p) {
  if (!p) return;
  const PosConfig c;
  p->nodes = c.nodes;
  p->alpha = c.alpha;
  p->stake_per_node = c.stake_per_node;
  p->slots = c.slots;
  p->delta = c.delta;
  p->leaders_per_slot = c.leaders_per_slot;
  p->adversary = adversary_name(c.adversary);
  p->seed = c.seed;
  p->proof_every = c.proof_every;
  p->proof_rounds = c.proof_rounds;
  p->window = c.window;
}

namespace {

PosConfig pos_config(const pqvrf_pos_params* p) {
  need(p, "parameters");
  PosConfig c;
  c.nodes = p->nodes;
  c.alpha = p->alpha;
  c.stake_per_node = p->stake_per_node;
  c.slots = p->slots;
  c.delta = p->delta;
  c.leaders_per_slot = p->leaders_per_slot;
  c.adversary = parse_adversary(p->adversary ? p->adversary : "withhold");
  c.seed = p->seed;
  c.proof_every = p->proof_every;
  c.proof_rounds = p->proof_rounds;
  c.window = p->window;
  if (c.proof_every && c.proof_rounds == 0) throw std::invalid_argument("proof rounds must be positive");
  return c;
}

}  // namespace

int pqvrf_pos_honest_majority_violated(const pqvrf_pos_params* p) { return p && p->alpha >= 0.5; }

pqvrf_status pqvrf_pos_run(const pqvrf_pos_params* p, pqvrf_pos** out) {
  return guard([&] {
    need(out, "output");
    *out = new pqvrf_pos{run_pos(pos_config(p))};
    return PQVRF_OK;
  });
}

pqvrf_status pqvrf_pos_slots_csv(const pqvrf_pos* s, pqvrf_bytes** out) {
  return guard([&] {
    need(s, "simulation");
    return emit(out, s->run.slots_csv());
  });
}

pqvrf_status pqvrf_pos_summary(const pqvrf_pos* s, pqvrf_bytes** out) {
  return guard([&] {
    need(s, "simulation");
    return emit(out, s->run.summary_json());
  });
}

size_t pqvrf_pos_recheck_failures(const pqvrf_pos* s) { return s ? recheck_blocks(s->run).size() : 0; }

void pqvrf_pos_free(pqvrf_pos* s) { delete s; }

pqvrf_status pqvrf_bench(const pqvrf_bench_params* p, pqvrf_bytes** csv) {
  return guard([&] {
    need(p, "parameters");
    BenchConfig c;
    if (!p->rounds || p->rounds_len == 0) throw std::invalid_argument("rounds list is empty");
    c.rounds.assign(p->rounds, p->rounds + p->rounds_len);
    const std::string mode = p->mode ? p->mode : "both";
    if (mode == "both") c.modes = {ProofMode::kZkboo, ProofMode::kZkbpp};
    else c.modes = {parse_mode(mode)};
    c.reps = p->reps;
    c.threads = p->threads ? p->threads : 1;
    c.seed = p->seed;
    return emit(csv, bench_csv(run_bench(c)));
  });
}

}  // extern "C"
