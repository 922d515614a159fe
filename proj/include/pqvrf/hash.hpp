#pragma once

// SHA-256 plumbing: one-shot and incremental hashing (OpenSSL backed), the
// raw compression function in software, domain tags, and a hash-counter DRBG.

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "pqvrf/bytes.hpp"

namespace pqvrf {

/// One-byte domain separators. Every hash call in the library starts with one.
enum class HashTag : std::uint8_t {
  kFiatShamir = 0x00,
  kH1 = 0x01,
  kH2Chain = 0x02,
  kH3 = 0x03,
  kFChain = 0x04,
  kTape = 0x10,
  kCommit = 0x11,
  kChallengeContext = 0x12,
  kEqContext = 0x13,
  kCircuit = 0x14,
  kProofTrailer = 0x15,
  kDrbg = 0x20,
  kDvrfHashToField = 0x30,
  kDvrfCommitBase = 0x31,
  kDvrfNonce = 0x32,
  kDvrfChallenge = 0x33,
  kBeaconRound = 0x40,
  kBlock = 0x50,
  kPosMessage = 0x51,
  kCommitteeMessage = 0x52,
};

Digest sha256(std::span<const std::uint8_t> data);

class Sha256 {
 public:
  Sha256();
  explicit Sha256(HashTag tag);
  ~Sha256();
  Sha256(Sha256&&) noexcept;
  Sha256& operator=(Sha256&&) noexcept;
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::span<const std::uint8_t> data);
  Sha256& update_u8(std::uint8_t v);
  Sha256& update_u32(std::uint32_t v);
  Sha256& update_u64(std::uint64_t v);
  Digest finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Digest tagged_hash(HashTag tag, std::span<const std::uint8_t> data);

using ChainValue = std::array<std::uint32_t, 8>;
using Block512 = std::array<std::uint8_t, 64>;

/// Standard SHA-256 initial chaining value.
const ChainValue& sha256_iv();

/// One application of the SHA-256 compression function, including the
/// feed-forward addition. No padding is applied.
ChainValue sha256_compress(const ChainValue& cv, const Block512& block);

Digest chain_to_bytes(const ChainValue& cv);
ChainValue chain_from_bytes(std::span<const std::uint8_t, 32> bytes);

/// Deterministic byte stream: block i = H(kDrbg || seed || i).
class Drbg {
 public:
  explicit Drbg(std::span<const std::uint8_t> seed);
  explicit Drbg(std::uint64_t seed);

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  /// Uniform in [0, bound) by rejection; bound must be non-zero.
  std::uint64_t uniform(std::uint64_t bound);
  double unit();  // [0, 1)
  template <std::size_t N>
  std::array<std::uint8_t, N> bytes() {
    std::array<std::uint8_t, N> out{};
    fill(out);
    return out;
  }
  /// Independent child stream keyed by a label.
  Drbg fork(std::uint64_t label) const;

 private:
  void refill();
  Digest key_{};
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t used_ = 32;
};

}  // namespace pqvrf
