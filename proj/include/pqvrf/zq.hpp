#pragma once

// Arithmetic modulo a prime q of at most 256 bits.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "pqvrf/bytes.hpp"
#include "pqvrf/hash.hpp"

namespace pqvrf {

using U256 = boost::multiprecision::uint256_t;
using U512 = boost::multiprecision::uint512_t;

/// 2^256 - 2^32 - 977.
const U256& default_dvrf_prime();

class Zq {
 public:
  explicit Zq(U256 q);

  const U256& modulus() const { return q_; }
  bool contains(const U256& a) const { return a < q_; }

  U256 reduce(const U256& a) const { return a % q_; }
  U256 add(const U256& a, const U256& b) const;
  U256 sub(const U256& a, const U256& b) const { return a >= b ? a - b : q_ - (b - a); }
  U256 neg(const U256& a) const { return a == 0 ? U256(0) : q_ - a; }
  U256 mul(const U256& a, const U256& b) const;
  U256 pow(U256 base, U256 exp) const;
  /// Throws std::domain_error on zero.
  U256 inv(const U256& a) const;
  U256 from_u64(std::uint64_t v) const { return reduce(U256(v)); }

  /// Uniform element by rejection from 256-bit draws.
  U256 random(Drbg& rng) const;
  /// Hash-derived non-zero element: H(tag || data || ctr) mod q for the first
  /// counter giving a non-zero value.
  U256 hash_to_nonzero(HashTag tag, std::span<const std::uint8_t> data) const;

  friend bool operator==(const Zq&, const Zq&) = default;

 private:
  U256 q_;
};

Digest u256_to_bytes(const U256& v);
U256 u256_from_bytes(std::span<const std::uint8_t> bytes);
std::string u256_hex(const U256& v);
U256 u256_from_hex(std::string_view hex);

}  // namespace pqvrf
