#include "pqvrf/vrf.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "json.hpp"
#include "pqvrf/circuit_builder.hpp"

namespace pqvrf {

namespace {

constexpr std::array<std::uint8_t, 4> kEvalMagic = {'P', 'Q', 'V', 'R'};
constexpr std::uint16_t kEvalVersion = 1;
constexpr int kKeyVersion = 1;

ChainValue derive_chain(HashTag tag, std::string_view label) {
  Digest d = tagged_hash(tag, as_bytes(label));
  return chain_from_bytes(d);
}

Block512 join(const Digest& left, const Digest& right) {
  Block512 b{};
  std::copy(left.begin(), left.end(), b.begin());
  std::copy(right.begin(), right.end(), b.begin() + 32);
  return b;
}

// Compression circuit with the chaining value fixed and one half of the block
// fixed; the other half (`free_half` 0 = first, 1 = second) stays the input.
std::shared_ptr<const Circuit> bound_circuit(const ChainValue& cv, const Digest& fixed, int free_half) {
  static std::mutex mu;
  static std::map<std::tuple<int, Digest, Digest>, std::shared_ptr<const Circuit>> cache;
  const Digest cv_bytes = chain_to_bytes(cv);
  const auto key = std::make_tuple(free_half, cv_bytes, fixed);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const Circuit& base = sha256_compression_circuit();
  std::vector<std::optional<Elem>> bind(768);
  auto fixed_bits = bytes_to_bits(fixed);
  auto cv_bits = bytes_to_bits(cv_bytes);
  const std::size_t fixed_off = free_half == 0 ? 256 : 0;
  for (std::size_t i = 0; i < 256; ++i) {
    bind[fixed_off + i] = fixed_bits[i];
    bind[512 + i] = cv_bits[i];
  }
  auto c = std::make_shared<const Circuit>(bind_inputs(base, bind));
  std::lock_guard lock(mu);
  if (cache.size() >= 64) cache.clear();
  cache.emplace(key, c);
  return c;
}

std::vector<Elem> bits_of(const Digest& d) { return bytes_to_bits(d); }

Bytes eval_context(const Digest& k, const Digest& h) {
  ByteWriter w;
  w.raw(as_bytes("pqvrf-eval"));
  w.raw(k);
  w.raw(h);
  return std::move(w).take();
}

Digest parse_hex_field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_string()) throw KeyFormatError(std::string("missing field ") + name);
  try {
    return digest_from_hex(j[name].get<std::string>());
  } catch (const DecodeError& e) {
    throw KeyFormatError(std::string("field ") + name + ": " + e.what());
  }
}

nlohmann::json parse_versioned(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw KeyFormatError(std::string("malformed key file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer())
    throw KeyVersionError("key file has no version");
  if (j["version"].get<int>() != kKeyVersion)
    throw KeyVersionError("unsupported key file version " + std::to_string(j["version"].get<int>()));
  return j;
}

nlohmann::json circuit_ids() {
  return {{"compress", vrf_circuit_id()},
          {"F", to_hex(chain_to_bytes(vrf_f_chain()))},
          {"H2", to_hex(chain_to_bytes(vrf_h2_chain()))}};
}

}  // namespace

const ChainValue& vrf_f_chain() {
  static const ChainValue cv = derive_chain(HashTag::kFChain, "pqvrf/F");
  return cv;
}

const ChainValue& vrf_h2_chain() {
  static const ChainValue cv = derive_chain(HashTag::kH2Chain, "pqvrf/H2");
  return cv;
}

Digest vrf_h1(std::span<const std::uint8_t> message) { return tagged_hash(HashTag::kH1, message); }

Digest vrf_f(const Digest& k, const Digest& s) { return chain_to_bytes(sha256_compress(vrf_f_chain(), join(k, s))); }

Digest vrf_h2(const Digest& s, const Digest& h) {
  return chain_to_bytes(sha256_compress(vrf_h2_chain(), join(s, h)));
}

Digest vrf_h3(const Digest& sigma) { return tagged_hash(HashTag::kH3, sigma); }

Circuit vrf_f_circuit(const Digest& k) { return *bound_circuit(vrf_f_chain(), k, 1); }
Circuit vrf_h2_circuit(const Digest& h) { return *bound_circuit(vrf_h2_chain(), h, 0); }

std::string vrf_circuit_id() { return to_hex(sha256_compression_circuit().digest()); }

VrfKeyMaterial vrf_gen(std::span<const std::uint8_t> rng_seed) {
  Drbg rng(rng_seed);
  VrfKeyMaterial keys;
  keys.k = rng.bytes<32>();
  keys.s = rng.bytes<32>();
  keys.alpha = vrf_f(keys.k, keys.s);
  return keys;
}

Digest vrf_output(const Digest& s, std::span<const std::uint8_t> message) {
  return vrf_h3(vrf_h2(s, vrf_h1(message)));
}

VrfEvaluation vrf_eval(const VrfKeyMaterial& keys, std::span<const std::uint8_t> message,
                       std::span<const std::uint8_t> rng_seed, const VrfOptions& options) {
  VrfEvaluation ev;
  ev.statement.alpha = keys.alpha;
  ev.statement.k = keys.k;
  ev.statement.h = vrf_h1(message);
  ev.statement.sigma = vrf_h2(keys.s, ev.statement.h);
  ev.beta = vrf_h3(ev.statement.sigma);

  auto cf = bound_circuit(vrf_f_chain(), keys.k, 1);
  auto ch = bound_circuit(vrf_h2_chain(), ev.statement.h, 0);
  auto ctx = eval_context(keys.k, ev.statement.h);
  ev.proof = eq_prove(*cf, bits_of(keys.alpha), *ch, bits_of(ev.statement.sigma), bits_of(keys.s), options.rounds,
                      options.mode, rng_seed, ctx, options.threads);
  return ev;
}

const char* vrf_reject_name(VrfReject r) {
  switch (r) {
    case VrfReject::kNone: return "accept";
    case VrfReject::kHMismatch: return "h-mismatch";
    case VrfReject::kBetaMismatch: return "beta-mismatch";
    case VrfReject::kKeyMismatch: return "key-mismatch";
    case VrfReject::kProof: return "proof";
  }
  return "?";
}

std::string VrfVerdict::describe() const {
  if (accepted()) return "accept";
  if (reason == VrfReject::kProof) return std::string("proof: ") + proof.describe();
  return vrf_reject_name(reason);
}

VrfVerdict vrf_verify(const VrfPublicKey& pk, std::span<const std::uint8_t> message, const VrfEvaluation& ev,
                      unsigned threads) {
  VrfVerdict v;
  const VrfStatement& st = ev.statement;
  if (st.h != vrf_h1(message)) {
    v.reason = VrfReject::kHMismatch;
    return v;
  }
  if (ev.beta != vrf_h3(st.sigma)) {
    v.reason = VrfReject::kBetaMismatch;
    return v;
  }
  if (st.alpha != pk.alpha || st.k != pk.k) {
    v.reason = VrfReject::kKeyMismatch;
    return v;
  }
  auto cf = bound_circuit(vrf_f_chain(), pk.k, 1);
  auto ch = bound_circuit(vrf_h2_chain(), st.h, 0);
  v.proof = eq_verify(*cf, bits_of(pk.alpha), *ch, bits_of(st.sigma), ev.proof, eval_context(pk.k, st.h), threads);
  if (!v.proof.accepted()) v.reason = VrfReject::kProof;
  return v;
}

std::string public_key_json(const VrfPublicKey& pk) {
  nlohmann::ordered_json j;
  j["version"] = kKeyVersion;
  j["k_hex"] = to_hex(pk.k);
  j["alpha_hex"] = to_hex(pk.alpha);
  j["circuit_ids"] = circuit_ids();
  return j.dump(2) + "\n";
}

std::string secret_key_json(const VrfKeyMaterial& keys) {
  nlohmann::ordered_json j;
  j["version"] = kKeyVersion;
  j["s_hex"] = to_hex(keys.s);
  return j.dump(2) + "\n";
}

VrfPublicKey parse_public_key_json(std::string_view text) {
  auto j = parse_versioned(text);
  VrfPublicKey pk;
  pk.k = parse_hex_field(j, "k_hex");
  pk.alpha = parse_hex_field(j, "alpha_hex");
  if (!j.contains("circuit_ids") || j["circuit_ids"] != circuit_ids())
    throw KeyFormatError("public key was made for different circuits");
  return pk;
}

VrfKeyMaterial parse_secret_key_json(std::string_view text, const VrfPublicKey& pk) {
  auto j = parse_versioned(text);
  VrfKeyMaterial keys;
  keys.k = pk.k;
  keys.alpha = pk.alpha;
  keys.s = parse_hex_field(j, "s_hex");
  if (vrf_f(keys.k, keys.s) != keys.alpha) throw KeyFormatError("secret key does not match public key");
  return keys;
}

Bytes serialize(const VrfEvaluation& ev) {
  ByteWriter w;
  w.raw(kEvalMagic);
  w.u16(kEvalVersion);
  w.raw(ev.beta);
  w.raw(ev.statement.alpha);
  w.raw(ev.statement.k);
  w.raw(ev.statement.sigma);
  w.raw(ev.statement.h);
  w.blob(serialize(ev.proof));
  return std::move(w).take();
}

VrfEvaluation deserialize_evaluation(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kEvalMagic.size() || !std::equal(kEvalMagic.begin(), kEvalMagic.end(), bytes.begin()))
    throw DecodeError("evaluation magic mismatch", DecodeFailure::kMagic);
  ByteReader r(bytes);
  r.raw(kEvalMagic.size());
  if (r.u16() != kEvalVersion) throw DecodeError("unsupported evaluation version", DecodeFailure::kVersion);
  VrfEvaluation ev;
  ev.beta = r.fixed<32>();
  ev.statement.alpha = r.fixed<32>();
  ev.statement.k = r.fixed<32>();
  ev.statement.sigma = r.fixed<32>();
  ev.statement.h = r.fixed<32>();
  ev.proof = deserialize_eq(r.blob());
  if (!r.done()) throw DecodeError("trailing bytes after evaluation");
  return ev;
}

}  // namespace pqvrf
