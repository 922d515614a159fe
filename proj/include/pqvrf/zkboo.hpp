#pragma once

// Non-interactive MPC-in-the-head proofs (ZKBoo and the ZKB++ encoding) for
// statements y = C(w) over a gate-list circuit.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqvrf/circuit.hpp"
#include "pqvrf/decomposition.hpp"
#include "pqvrf/hash.hpp"

namespace pqvrf {

enum class ProofMode : std::uint8_t { kZkboo = 0, kZkbpp = 1 };

const char* mode_name(ProofMode mode);
ProofMode parse_mode(std::string_view name);

/// (2/3)^137 < 2^-80.
inline constexpr std::uint32_t kSecureRounds = 137;

/// Hash commitment: H(kCommit || randomizer || payload).
Digest commit(const Digest& randomizer, std::span<const std::uint8_t> payload);
bool open_commitment(const Digest& digest, const Digest& randomizer, std::span<const std::uint8_t> payload);

/// Data revealed for one opened player. Which fields are populated depends
/// on the mode: ZKBoo carries the expanded tape; ZKB++ carries the 128-bit
/// seed and omits the input share of players 1 and 2 (it is tape-derived).
struct Opening {
  Player player = 1;
  Digest randomizer{};
  TapeSeed seed{};
  std::vector<Elem> tape;
  std::vector<Elem> input_share;
  std::vector<Elem> mul_wires;

  friend bool operator==(const Opening&, const Opening&) = default;
};

struct IterationBroadcast {
  std::array<std::vector<Elem>, 3> output_shares;
  std::array<Digest, 3> commitments{};

  friend bool operator==(const IterationBroadcast&, const IterationBroadcast&) = default;
};

struct IterationRecord {
  IterationBroadcast broadcast;
  std::array<Opening, 2> openings;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct ProofBundle {
  ProofMode mode = ProofMode::kZkbpp;
  std::uint32_t rounds = 0;
  std::uint32_t modulus = 2;
  Digest circuit_digest{};
  std::vector<Elem> statement;
  std::vector<IterationRecord> iterations;
  /// One trit in {1,2,3} per iteration; recomputable from the broadcasts.
  std::vector<std::uint8_t> challenge;

  friend bool operator==(const ProofBundle&, const ProofBundle&) = default;
};

enum class RejectReason {
  kNone,
  kStructure,
  kChallengeMismatch,
  kCommitmentOpenFail,
  kRecMismatch,
  kOutputMismatch,
  kWireMismatch,
};

const char* reason_name(RejectReason r);

struct Verdict {
  RejectReason reason = RejectReason::kNone;
  std::uint32_t iteration = 0;
  WireId wire = 0;
  std::string detail;

  bool accepted() const { return reason == RejectReason::kNone; }
  explicit operator bool() const { return accepted(); }
  std::string describe() const;

  static Verdict accept() { return {}; }
  static Verdict reject(RejectReason r, std::string detail = {}, std::uint32_t iteration = 0, WireId wire = 0) {
    return {r, iteration, wire, std::move(detail)};
  }
};

/// Raised when prove is asked to prove a statement the witness does not satisfy.
class StatementMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProveOptions {
  unsigned threads = 1;
};

ProofBundle prove(const Circuit& circuit, std::span<const Elem> statement, std::span<const Elem> witness,
                  std::uint32_t rounds, ProofMode mode, std::span<const std::uint8_t> rng_seed,
                  const ProveOptions& options = {});

Verdict verify(const Circuit& circuit, std::span<const Elem> statement, const ProofBundle& bundle,
               unsigned threads = 1);

/// A scripted cheating prover: in every iteration, `player`'s share of the
/// output of MUL gate number `mul_index` is shifted by one before anything is
/// committed, and the change propagates. Used to measure soundness.
struct CheatFault {
  Player player = 1;
  std::uint32_t mul_index = 0;
};

/// Like prove, but skips the statement check and applies `fault`.
ProofBundle prove_cheating(const Circuit& circuit, std::span<const Elem> claimed_statement,
                           std::span<const Elem> witness, std::uint32_t rounds, ProofMode mode,
                           std::span<const std::uint8_t> rng_seed, const CheatFault& fault);

/// Maps a byte stream to trits, two bits at a time, MSB first within each
/// byte: 00->1, 01->2, 10->3, 11->skip. Stops after `count` trits or at the
/// end of the input.
std::vector<std::uint8_t> trits_from_bytes(std::span<const std::uint8_t> stream, std::size_t count);

/// Fiat-Shamir challenge: stream block 0 = H(kFiatShamir || context ||
/// broadcasts), block k = H(kFiatShamir || block0 || k), consumed by
/// trits_from_bytes until one trit per broadcast is produced (or `count`
/// trits, when given).
std::vector<std::uint8_t> derive_challenge(std::span<const IterationBroadcast> broadcasts,
                                           std::span<const std::uint8_t> context,
                                           std::optional<std::size_t> count = std::nullopt);

/// Context bound into the single-relation challenge.
Bytes proof_context(const Circuit& circuit, std::span<const Elem> statement, ProofMode mode, std::uint32_t rounds);

Bytes serialize(const ProofBundle& bundle);
/// Throws DecodeError (magic, version, truncation, length, checksum).
ProofBundle deserialize(std::span<const std::uint8_t> bytes);

// Iteration-level building blocks shared with the equality proof.
namespace zkboo_detail {

struct PlayerSecret {
  TapeSeed seed{};
  Digest randomizer{};
  std::vector<Elem> tape;
  std::vector<Elem> input_share;
  std::vector<Elem> mul_wires;
};

struct CommittedIteration {
  IterationBroadcast broadcast;
  std::array<PlayerSecret, 3> players;
};

/// Runs one decomposition with randomness drawn from `rng` and commits to all
/// three views.
CommittedIteration commit_iteration(const Circuit& circuit, std::span<const Elem> witness, ProofMode mode,
                                    Drbg& rng, const CheatFault* fault = nullptr);

IterationRecord open_iteration(CommittedIteration&& it, Player e, ProofMode mode);

/// Checks (b)-(e) for one iteration whose challenge trit is `e`.
Verdict verify_iteration(const Circuit& circuit, std::span<const Elem> statement, ProofMode mode,
                         const IterationRecord& record, Player e, std::uint32_t index);

/// Commitment payload for a player; `tape` is only read in ZKBoo mode.
Bytes commitment_payload(const Field& field, ProofMode mode, const TapeSeed& seed, std::span<const Elem> tape,
                         std::span<const Elem> input_share, std::span<const Elem> mul_wires);

void write_elems(ByteWriter& w, const Field& field, std::span<const Elem> elems, bool with_count);
std::vector<Elem> read_elems(ByteReader& r, const Field& field, std::optional<std::size_t> count);
void write_record(ByteWriter& w, const Field& field, ProofMode mode, const IterationRecord& rec, Player e);
IterationRecord read_record(ByteReader& r, const Field& field, ProofMode mode, std::span<const Elem> statement,
                            Player& e);

}  // namespace zkboo_detail

}  // namespace pqvrf
