#pragma once

// Equality proof: one witness, two relations y_a = C_a(w) and y_b = C_b(w),
// proven by two independent decompositions opened under a single joint
// challenge.

#include <cstdint>
#include <span>
#include <vector>

#include "pqvrf/zkboo.hpp"

namespace pqvrf {

struct EqProof {
  ProofMode mode = ProofMode::kZkbpp;
  std::uint32_t rounds = 0;
  std::uint32_t modulus = 2;
  Digest digest_a{};
  Digest digest_b{};
  std::vector<Elem> statement_a;
  std::vector<Elem> statement_b;
  std::vector<std::uint8_t> challenge;
  std::vector<IterationRecord> side_a;
  std::vector<IterationRecord> side_b;

  friend bool operator==(const EqProof&, const EqProof&) = default;
};

enum class EqSide { kNone, kJoint, kA, kB };
const char* side_name(EqSide s);

struct EqVerdict {
  EqSide side = EqSide::kNone;
  Verdict verdict;

  bool accepted() const { return verdict.accepted(); }
  explicit operator bool() const { return accepted(); }
  std::string describe() const;
};

/// Both relations must hold for `witness` (StatementMismatch otherwise), the
/// circuits must share a field and input count. `context` is extra public
/// data bound into the challenge.
EqProof eq_prove(const Circuit& circuit_a, std::span<const Elem> statement_a, const Circuit& circuit_b,
                 std::span<const Elem> statement_b, std::span<const Elem> witness, std::uint32_t rounds,
                 ProofMode mode, std::span<const std::uint8_t> rng_seed, std::span<const std::uint8_t> context = {},
                 unsigned threads = 1);

EqVerdict eq_verify(const Circuit& circuit_a, std::span<const Elem> statement_a, const Circuit& circuit_b,
                    std::span<const Elem> statement_b, const EqProof& proof, std::span<const std::uint8_t> context = {},
                    unsigned threads = 1);

Bytes eq_context(const Circuit& circuit_a, std::span<const Elem> statement_a, const Circuit& circuit_b,
                 std::span<const Elem> statement_b, ProofMode mode, std::uint32_t rounds,
                 std::span<const std::uint8_t> context);

Bytes serialize(const EqProof& proof);
EqProof deserialize_eq(std::span<const std::uint8_t> bytes);

}  // namespace pqvrf
