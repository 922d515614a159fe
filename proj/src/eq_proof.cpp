#include "pqvrf/eq_proof.hpp"

#include <algorithm>

#include "parallel.hpp"

namespace pqvrf {

namespace {

constexpr std::array<std::uint8_t, 4> kEqMagic = {'P', 'Q', 'E', 'Q'};
constexpr std::uint16_t kEqVersion = 1;

void hash_statement(Sha256& h, std::span<const Elem> v) {
  h.update_u32(static_cast<std::uint32_t>(v.size()));
  for (Elem e : v) h.update_u32(e);
}

void check_pair(const Circuit& a, const Circuit& b) {
  if (a.field() != b.field()) throw std::invalid_argument("equality proof needs both circuits over one field");
  if (a.input_count() != b.input_count())
    throw std::invalid_argument("equality proof needs circuits with the same witness length");
}

}  // namespace

const char* side_name(EqSide s) {
  switch (s) {
    case EqSide::kNone: return "none";
    case EqSide::kJoint: return "joint";
    case EqSide::kA: return "alpha";
    case EqSide::kB: return "sigma";
  }
  return "?";
}

std::string EqVerdict::describe() const {
  if (accepted()) return "accept";
  return std::string(side_name(side)) + ": " + verdict.describe();
}

Bytes eq_context(const Circuit& circuit_a, std::span<const Elem> statement_a, const Circuit& circuit_b,
                 std::span<const Elem> statement_b, ProofMode mode, std::uint32_t rounds,
                 std::span<const std::uint8_t> context) {
  Sha256 h(HashTag::kEqContext);
  h.update(circuit_a.digest()).update(circuit_b.digest()).update_u32(circuit_a.field().modulus());
  hash_statement(h, statement_a);
  hash_statement(h, statement_b);
  h.update_u8(static_cast<std::uint8_t>(mode)).update_u32(rounds);
  h.update_u32(static_cast<std::uint32_t>(context.size())).update(context);
  Digest d = h.finish();
  return Bytes(d.begin(), d.end());
}

EqProof eq_prove(const Circuit& circuit_a, std::span<const Elem> statement_a, const Circuit& circuit_b,
                 std::span<const Elem> statement_b, std::span<const Elem> witness, std::uint32_t rounds,
                 ProofMode mode, std::span<const std::uint8_t> rng_seed, std::span<const std::uint8_t> context,
                 unsigned threads) {
  check_pair(circuit_a, circuit_b);
  if (rounds == 0) throw std::invalid_argument("proof needs at least one round");
  if (witness.size() != circuit_a.input_count()) throw StatementMismatch("witness length does not match circuits");
  if (evaluate(circuit_a, witness) != std::vector<Elem>(statement_a.begin(), statement_a.end()))
    throw StatementMismatch("witness does not satisfy the first relation");
  if (evaluate(circuit_b, witness) != std::vector<Elem>(statement_b.begin(), statement_b.end()))
    throw StatementMismatch("witness does not satisfy the second relation");

  Drbg root(rng_seed);
  std::vector<zkboo_detail::CommittedIteration> ca(rounds), cb(rounds);
  parallel_for(2 * rounds, threads, [&](std::uint32_t k) {
    Drbg rng = root.fork(k);
    if (k % 2 == 0) ca[k / 2] = zkboo_detail::commit_iteration(circuit_a, witness, mode, rng);
    else cb[k / 2] = zkboo_detail::commit_iteration(circuit_b, witness, mode, rng);
  });

  std::vector<IterationBroadcast> all;
  all.reserve(2 * rounds);
  for (const auto& c : ca) all.push_back(c.broadcast);
  for (const auto& c : cb) all.push_back(c.broadcast);

  EqProof p;
  p.mode = mode;
  p.rounds = rounds;
  p.modulus = circuit_a.field().modulus();
  p.digest_a = circuit_a.digest();
  p.digest_b = circuit_b.digest();
  p.statement_a.assign(statement_a.begin(), statement_a.end());
  p.statement_b.assign(statement_b.begin(), statement_b.end());
  p.challenge = derive_challenge(
      all, eq_context(circuit_a, statement_a, circuit_b, statement_b, mode, rounds, context), rounds);
  for (std::uint32_t i = 0; i < rounds; ++i) {
    p.side_a.push_back(zkboo_detail::open_iteration(std::move(ca[i]), p.challenge[i], mode));
    p.side_b.push_back(zkboo_detail::open_iteration(std::move(cb[i]), p.challenge[i], mode));
  }
  return p;
}

EqVerdict eq_verify(const Circuit& circuit_a, std::span<const Elem> statement_a, const Circuit& circuit_b,
                    std::span<const Elem> statement_b, const EqProof& proof, std::span<const std::uint8_t> context,
                    unsigned threads) {
  auto joint = [](RejectReason r, std::string what) { return EqVerdict{EqSide::kJoint, Verdict::reject(r, what)}; };
  if (circuit_a.field() != circuit_b.field() || circuit_a.input_count() != circuit_b.input_count())
    return joint(RejectReason::kStructure, "circuit pair mismatch");
  if (proof.rounds == 0 || proof.challenge.size() != proof.rounds)
    return joint(RejectReason::kStructure, "round count inconsistent");
  if (proof.side_a.size() != proof.rounds || proof.side_b.size() != proof.rounds)
    return joint(RejectReason::kStructure, "side-length mismatch");
  if (proof.modulus != circuit_a.field().modulus() || proof.digest_a != circuit_a.digest() ||
      proof.digest_b != circuit_b.digest())
    return joint(RejectReason::kStructure, "proof is for different circuits");
  if (statement_a.size() != circuit_a.output_count() || statement_b.size() != circuit_b.output_count())
    return joint(RejectReason::kStructure, "statement length does not match circuit");
  if (!std::ranges::equal(proof.statement_a, statement_a) || !std::ranges::equal(proof.statement_b, statement_b))
    return joint(RejectReason::kStructure, "embedded statement differs");

  std::vector<IterationBroadcast> all;
  all.reserve(2 * proof.rounds);
  for (const auto& r : proof.side_a) all.push_back(r.broadcast);
  for (const auto& r : proof.side_b) all.push_back(r.broadcast);
  auto challenge = derive_challenge(
      all, eq_context(circuit_a, statement_a, circuit_b, statement_b, proof.mode, proof.rounds, context),
      proof.rounds);
  if (challenge != proof.challenge) return joint(RejectReason::kChallengeMismatch, "recomputed challenge differs");

  std::vector<Verdict> results(2 * proof.rounds);
  parallel_for(2 * proof.rounds, threads, [&](std::uint32_t k) {
    const std::uint32_t i = k / 2;
    if (k % 2 == 0)
      results[k] = zkboo_detail::verify_iteration(circuit_a, statement_a, proof.mode, proof.side_a[i], challenge[i], i);
    else
      results[k] = zkboo_detail::verify_iteration(circuit_b, statement_b, proof.mode, proof.side_b[i], challenge[i], i);
  });
  // Report side a before side b, then by iteration.
  for (int side = 0; side < 2; ++side)
    for (std::uint32_t i = 0; i < proof.rounds; ++i) {
      const Verdict& v = results[2 * i + side];
      if (!v.accepted()) return {side == 0 ? EqSide::kA : EqSide::kB, v};
    }
  return {};
}

Bytes serialize(const EqProof& p) {
  const Field field(p.modulus);
  ByteWriter w;
  w.raw(kEqMagic);
  w.u16(kEqVersion);
  w.u8(static_cast<std::uint8_t>(p.mode));
  w.u32(p.rounds);
  w.u32(p.modulus);
  w.raw(p.digest_a);
  w.raw(p.digest_b);
  for (const auto* stmt : {&p.statement_a, &p.statement_b}) {
    ByteWriter s;
    zkboo_detail::write_elems(s, field, *stmt, true);
    w.blob(s.bytes());
  }
  for (const auto* side : {&p.side_a, &p.side_b})
    for (std::size_t i = 0; i < side->size(); ++i) {
      ByteWriter rec;
      zkboo_detail::write_record(rec, field, p.mode, (*side)[i], p.challenge.at(i));
      w.blob(rec.bytes());
    }
  Digest trailer = tagged_hash(HashTag::kProofTrailer, w.bytes());
  w.raw(trailer);
  return std::move(w).take();
}

EqProof deserialize_eq(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kEqMagic.size() || !std::equal(kEqMagic.begin(), kEqMagic.end(), bytes.begin()))
    throw DecodeError("equality proof magic mismatch", DecodeFailure::kMagic);
  if (bytes.size() < kEqMagic.size() + 32) throw DecodeError("truncated equality proof", DecodeFailure::kTruncated);
  auto body = bytes.first(bytes.size() - 32);
  ByteReader r(body);
  r.raw(kEqMagic.size());
  if (r.u16() != kEqVersion) throw DecodeError("unsupported equality proof version", DecodeFailure::kVersion);
  EqProof p;
  std::uint8_t mode = r.u8();
  if (mode > 1) throw DecodeError("unknown proof mode");
  p.mode = static_cast<ProofMode>(mode);
  p.rounds = r.u32();
  if (p.rounds == 0) throw DecodeError("proof declares zero rounds");
  p.modulus = r.u32();
  const Field field = [&] {
    try {
      return Field(p.modulus);
    } catch (const std::exception&) {
      throw DecodeError("invalid field modulus");
    }
  }();
  p.digest_a = r.fixed<32>();
  p.digest_b = r.fixed<32>();
  for (auto* stmt : {&p.statement_a, &p.statement_b}) {
    ByteReader s(r.blob());
    *stmt = zkboo_detail::read_elems(s, field, std::nullopt);
    if (!s.done()) throw DecodeError("trailing bytes in statement");
  }
  if (p.rounds > r.remaining() / 8) throw DecodeError("round count exceeds input", DecodeFailure::kLength);
  std::vector<std::uint8_t> trits_b;
  for (int side = 0; side < 2; ++side) {
    auto& out = side == 0 ? p.side_a : p.side_b;
    const auto& stmt = side == 0 ? p.statement_a : p.statement_b;
    for (std::uint32_t i = 0; i < p.rounds; ++i) {
      ByteReader rec(r.blob());
      Player e = 1;
      out.push_back(zkboo_detail::read_record(rec, field, p.mode, stmt, e));
      if (!rec.done()) throw DecodeError("trailing bytes in iteration record");
      if (side == 0) p.challenge.push_back(static_cast<std::uint8_t>(e));
      else trits_b.push_back(static_cast<std::uint8_t>(e));
    }
  }
  if (trits_b != p.challenge) throw DecodeError("sides disagree on the challenge");
  if (!r.done()) throw DecodeError("trailing bytes after last iteration");
  Digest expected = tagged_hash(HashTag::kProofTrailer, body);
  if (!std::equal(expected.begin(), expected.end(), bytes.end() - 32))
    throw DecodeError("proof hash mismatch", DecodeFailure::kChecksum);
  return p;
}

}  // namespace pqvrf
