#include "pqvrf/zq.hpp"

#include <stdexcept>

namespace pqvrf {

const U256& default_dvrf_prime() {
  static const U256 p("0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F");
  return p;
}

Zq::Zq(U256 q) : q_(std::move(q)) {
  if (q_ < 2) throw std::invalid_argument("modulus must be at least 2");
}

U256 Zq::add(const U256& a, const U256& b) const {
  U512 s = U512(a) + U512(b);
  if (s >= U512(q_)) s -= U512(q_);
  return static_cast<U256>(s);
}

U256 Zq::mul(const U256& a, const U256& b) const { return static_cast<U256>((U512(a) * U512(b)) % U512(q_)); }

U256 Zq::pow(U256 base, U256 exp) const {
  U256 result = 1 % q_;
  base = reduce(base);
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

U256 Zq::inv(const U256& a) const {
  if (reduce(a) == 0) throw std::domain_error("zero has no inverse mod q");
  return pow(a, q_ - 2);
}

U256 Zq::random(Drbg& rng) const {
  // Rejection on the top-aligned range keeps the draw exactly uniform.
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(q_)) + 1;
  for (;;) {
    auto raw = rng.bytes<32>();
    U256 v = u256_from_bytes(raw);
    if (bits < 256) v &= (U256(1) << bits) - 1;
    if (v < q_) return v;
  }
}

U256 Zq::hash_to_nonzero(HashTag tag, std::span<const std::uint8_t> data) const {
  for (std::uint32_t ctr = 0;; ++ctr) {
    Sha256 h(tag);
    h.update(data).update_u32(ctr);
    U256 v = reduce(u256_from_bytes(h.finish()));
    if (v != 0) return v;
  }
}

Digest u256_to_bytes(const U256& v) {
  Digest out{};
  U256 x = v;
  for (int i = 31; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(x & 0xff);
    x >>= 8;
  }
  return out;
}

U256 u256_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() > 32) throw DecodeError("integer wider than 256 bits", DecodeFailure::kLength);
  U256 v = 0;
  for (auto b : bytes) v = (v << 8) | b;
  return v;
}

std::string u256_hex(const U256& v) { return to_hex(u256_to_bytes(v)); }

U256 u256_from_hex(std::string_view hex) { return u256_from_bytes(from_hex(hex)); }

}  // namespace pqvrf
