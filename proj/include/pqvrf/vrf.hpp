#pragma once

// Hash-based VRF. Keys: public PRF key k, secret s, public alpha = F(k, s).
// Evaluation on m: h = H1(m), sigma = H2(s, h), beta = H3(sigma), with an
// equality proof that the same s opens alpha and sigma.
//
// F(k, s)  = compress(cv_F,  k || s)
// H2(s, h) = compress(cv_H2, s || h)
// cv_F and cv_H2 are fixed chaining values derived from domain labels, which
// keeps both inputs inside a single 512-bit block.

#include <cstdint>
#include <span>
#include <string>

#include "pqvrf/eq_proof.hpp"

namespace pqvrf {

struct VrfPublicKey {
  Digest k{};
  Digest alpha{};

  friend bool operator==(const VrfPublicKey&, const VrfPublicKey&) = default;
};

struct VrfKeyMaterial {
  Digest k{};
  Digest s{};
  Digest alpha{};

  VrfPublicKey public_key() const { return {k, alpha}; }
};

struct VrfStatement {
  Digest alpha{};
  Digest k{};
  Digest sigma{};
  Digest h{};

  friend bool operator==(const VrfStatement&, const VrfStatement&) = default;
};

struct VrfEvaluation {
  Digest beta{};
  VrfStatement statement;
  EqProof proof;

  friend bool operator==(const VrfEvaluation&, const VrfEvaluation&) = default;
};

const ChainValue& vrf_f_chain();
const ChainValue& vrf_h2_chain();

Digest vrf_h1(std::span<const std::uint8_t> message);
Digest vrf_f(const Digest& k, const Digest& s);
Digest vrf_h2(const Digest& s, const Digest& h);
Digest vrf_h3(const Digest& sigma);

/// Relation circuits with every public input bound: both take the 256 bits of
/// s and output 256 bits.
Circuit vrf_f_circuit(const Digest& k);
Circuit vrf_h2_circuit(const Digest& h);

/// Identifiers published with the key: digest of the base compression
/// circuit and the two chaining values.
std::string vrf_circuit_id();

VrfKeyMaterial vrf_gen(std::span<const std::uint8_t> rng_seed);

struct VrfOptions {
  std::uint32_t rounds = kSecureRounds;
  ProofMode mode = ProofMode::kZkbpp;
  unsigned threads = 1;
};

VrfEvaluation vrf_eval(const VrfKeyMaterial& keys, std::span<const std::uint8_t> message,
                       std::span<const std::uint8_t> rng_seed, const VrfOptions& options = {});

/// Output only, without a proof.
Digest vrf_output(const Digest& s, std::span<const std::uint8_t> message);

enum class VrfReject { kNone, kHMismatch, kBetaMismatch, kKeyMismatch, kProof };
const char* vrf_reject_name(VrfReject r);

struct VrfVerdict {
  VrfReject reason = VrfReject::kNone;
  EqVerdict proof;

  bool accepted() const { return reason == VrfReject::kNone; }
  explicit operator bool() const { return accepted(); }
  std::string describe() const;
};

VrfVerdict vrf_verify(const VrfPublicKey& pk, std::span<const std::uint8_t> message, const VrfEvaluation& evaluation,
                      unsigned threads = 1);

// File formats.
std::string public_key_json(const VrfPublicKey& pk);
std::string secret_key_json(const VrfKeyMaterial& keys);
VrfPublicKey parse_public_key_json(std::string_view text);
/// The secret file holds only s; k comes from the public key.
VrfKeyMaterial parse_secret_key_json(std::string_view text, const VrfPublicKey& pk);

Bytes serialize(const VrfEvaluation& evaluation);
VrfEvaluation deserialize_evaluation(std::span<const std::uint8_t> bytes);

/// Raised for malformed or mismatched key files.
class KeyFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyVersionError : public KeyFormatError {
 public:
  using KeyFormatError::KeyFormatError;
};

}  // namespace pqvrf
