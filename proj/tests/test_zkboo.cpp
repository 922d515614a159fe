#include <cmath>
#include <map>

#include "doctest.h"
#include "pqvrf/zkboo.hpp"
#include "support.hpp"

using namespace pqvrf;

namespace {

const std::vector<Elem> kOne{1};
const std::vector<Elem> kWitness11{1, 1};

ProofBundle and_proof(std::uint32_t t, ProofMode mode, std::uint64_t seed) {
  static const Circuit c = testing::and_circuit();
  return prove(c, kOne, kWitness11, t, mode, testing::seed_bytes(seed));
}

}  // namespace

TEST_CASE("trit mapping") {
  std::vector<std::uint8_t> s1 = {0b00011000};
  CHECK(trits_from_bytes(s1, 3) == std::vector<std::uint8_t>{1, 2, 3});
  std::vector<std::uint8_t> s2 = {0b11110001};
  CHECK(trits_from_bytes(s2, 1) == std::vector<std::uint8_t>{1});
  CHECK(trits_from_bytes(s2, 5) == std::vector<std::uint8_t>{1, 2});
}

TEST_CASE("challenge trits are balanced") {
  std::map<int, int> counts;
  Bytes ctx = {1, 2, 3};
  std::vector<IterationBroadcast> b(1);
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    b[0].commitments[0][0] = static_cast<std::uint8_t>(i);
    b[0].commitments[0][1] = static_cast<std::uint8_t>(i >> 8);
    b[0].commitments[0][2] = static_cast<std::uint8_t>(i >> 16);
    counts[derive_challenge(b, ctx)[0]]++;
  }
  const double mean = n / 3.0, sd = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
  for (int t = 1; t <= 3; ++t) CHECK(std::abs(counts[t] - mean) < 3 * sd);
}

TEST_CASE("AND circuit round trip in both modes") {
  const Circuit c = testing::and_circuit();
  for (ProofMode mode : {ProofMode::kZkboo, ProofMode::kZkbpp}) {
    for (std::uint32_t t : {1u, 3u, 20u}) {
      auto p = prove(c, kOne, kWitness11, t, mode, testing::seed_bytes(t));
      CHECK(verify(c, kOne, p).accepted());
      CHECK(p.challenge.size() == t);
    }
  }
}

TEST_CASE("prove refuses false statements and t = 0") {
  const Circuit c = testing::and_circuit();
  std::vector<Elem> w10{1, 0};
  CHECK_THROWS_AS(prove(c, kOne, w10, 3, ProofMode::kZkbpp, testing::seed_bytes(1)), StatementMismatch);
  CHECK_THROWS_AS(prove(c, kOne, kWitness11, 0, ProofMode::kZkbpp, testing::seed_bytes(1)), std::invalid_argument);
}

TEST_CASE("proofs are deterministic in the seed") {
  CHECK(serialize(and_proof(10, ProofMode::kZkbpp, 5)) == serialize(and_proof(10, ProofMode::kZkbpp, 5)));
  CHECK(serialize(and_proof(10, ProofMode::kZkbpp, 5)) != serialize(and_proof(10, ProofMode::kZkbpp, 6)));
}

TEST_CASE("threaded prove and verify agree with the serial path") {
  const Circuit& c = sha256_compression_circuit();
  Drbg rng(1);
  auto w = testing::random_elems(rng, Field::binary(), 768);
  auto y = evaluate(c, w);
  auto a = prove(c, y, w, 4, ProofMode::kZkbpp, testing::seed_bytes(2));
  auto b = prove(c, y, w, 4, ProofMode::kZkbpp, testing::seed_bytes(2), {3});
  CHECK(a == b);
  CHECK(verify(c, y, a, 3).accepted());
}

TEST_CASE("tampering is caught with the right reason") {
  const Circuit c = testing::and_circuit();
  for (ProofMode mode : {ProofMode::kZkboo, ProofMode::kZkbpp}) {
    auto honest = and_proof(8, mode, 77);

    auto p = honest;
    p.iterations[2].openings[0].mul_wires[0] ^= 1;
    auto v = verify(c, kOne, p);
    CHECK(v.reason == RejectReason::kCommitmentOpenFail);

    // An unopened commitment changes the challenge.
    p = honest;
    Player e = p.challenge[1];
    Player hidden = next_player(next_player(e));
    p.iterations[1].broadcast.commitments[hidden - 1][0] ^= 1;
    CHECK(verify(c, kOne, p).reason == RejectReason::kChallengeMismatch);

    p = honest;
    CHECK(verify(c, std::vector<Elem>{0}, p).reason == RejectReason::kStructure);
    p.statement = {0};
    CHECK(verify(c, std::vector<Elem>{0}, p).reason == RejectReason::kChallengeMismatch);
    p = honest;
    p.statement = {0};
    CHECK(verify(c, kOne, p).reason == RejectReason::kStructure);

    p = honest;
    p.iterations.pop_back();
    CHECK(verify(c, kOne, p).reason == RejectReason::kStructure);
  }
}

TEST_CASE("cheating against a false statement") {
  // Claim AND(1,0) = 1 and shift player 2's MUL share so the output shares
  // reconstruct to the claim. Only opening player 2 as e exposes it.
  const Circuit c = testing::and_circuit();
  std::vector<Elem> w10{1, 0};
  int accepted = 0;
  const int n = 600;
  for (int s = 0; s < n; ++s) {
    auto p = prove_cheating(c, kOne, w10, 1, ProofMode::kZkbpp, testing::seed_bytes(s), {2, 0});
    auto v = verify(c, kOne, p);
    if (p.challenge[0] == 2) {
      CHECK(v.reason == RejectReason::kWireMismatch);
      CHECK(v.wire == 2);
      CHECK(v.iteration == 0);
    } else {
      CHECK(v.accepted());
    }
    if (v.accepted()) ++accepted;
  }
  const double rate = static_cast<double>(accepted) / n;
  CHECK(rate > 0.59);
  CHECK(rate < 0.74);
}

TEST_CASE("serialization round trip and decode errors") {
  for (ProofMode mode : {ProofMode::kZkboo, ProofMode::kZkbpp}) {
    auto p = and_proof(6, mode, 3);
    auto bytes = serialize(p);
    CHECK(deserialize(bytes) == p);

    try {
      deserialize(Bytes{});
      FAIL("no error");
    } catch (const DecodeError& e) {
      CHECK(e.kind() == DecodeFailure::kMagic);
    }
    auto trunc = bytes;
    trunc.resize(bytes.size() - 40);
    CHECK_THROWS_AS(deserialize(trunc), DecodeError);
    auto flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x10;
    CHECK_THROWS_AS(deserialize(flipped), DecodeError);
    auto version = bytes;
    version[4] = 9;
    try {
      deserialize(version);
      FAIL("no error");
    } catch (const DecodeError& e) {
      CHECK(e.kind() == DecodeFailure::kVersion);
    }
  }
}

TEST_CASE("prime-field relation proves and verifies") {
  Drbg rng(21);
  Field f(101);
  Circuit c = testing::random_circuit(rng, f, 5, 30);
  auto w = testing::random_elems(rng, f, 5);
  auto y = evaluate(c, w);
  for (ProofMode mode : {ProofMode::kZkboo, ProofMode::kZkbpp}) {
    auto p = prove(c, y, w, 12, mode, testing::seed_bytes(1));
    CHECK(verify(c, y, p).accepted());
    CHECK(deserialize(serialize(p)) == p);
  }
}

TEST_CASE("sha256 proof sizes: linear in t and ZKB++ about half of ZKBoo") {
  const Circuit& c = sha256_compression_circuit();
  Drbg rng(31);
  auto w = testing::random_elems(rng, Field::binary(), 768);
  auto y = evaluate(c, w);
  auto size = [&](ProofMode mode, std::uint32_t t) {
    auto p = prove(c, y, w, t, mode, testing::seed_bytes(t));
    CHECK(verify(c, y, p).accepted());
    return static_cast<double>(serialize(p).size());
  };
  const double boo20 = size(ProofMode::kZkboo, 20), boo40 = size(ProofMode::kZkboo, 40);
  const double pp20 = size(ProofMode::kZkbpp, 20);
  CHECK(boo40 / boo20 >= 1.98);
  CHECK(boo40 / boo20 <= 2.02);
  CHECK(pp20 / boo20 >= 0.45);
  CHECK(pp20 / boo20 <= 0.60);
  MESSAGE("zkboo t=20: " << boo20 << " bytes, zkb++ t=20: " << pp20 << " bytes");
}
