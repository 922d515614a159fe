#include "pqvrf/zkboo.hpp"

#include <algorithm>
#include <cstring>

#include "parallel.hpp"

namespace pqvrf {

namespace {

constexpr std::array<std::uint8_t, 4> kProofMagic = {'P', 'Q', 'Z', 'K'};
constexpr std::uint16_t kProofVersion = 1;

Bytes pack(const Field& f, std::span<const Elem> elems) {
  const unsigned w = f.element_bits();
  Bytes out((elems.size() * w + 7) / 8, 0);
  std::size_t bit = 0;
  for (Elem e : elems) {
    for (unsigned k = 0; k < w; ++k, ++bit)
      if ((e >> k) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
  }
  return out;
}

std::vector<Elem> unpack(const Field& f, std::span<const std::uint8_t> bytes, std::size_t count) {
  const unsigned w = f.element_bits();
  if (bytes.size() != (count * w + 7) / 8) throw DecodeError("packed element vector has wrong length");
  std::vector<Elem> out(count, 0);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Elem e = 0;
    for (unsigned k = 0; k < w; ++k, ++bit) e |= static_cast<Elem>((bytes[bit / 8] >> (bit % 8)) & 1u) << k;
    if (!f.contains(e)) throw DecodeError("packed element not reduced mod q");
    out[i] = e;
  }
  return out;
}

bool all_in_field(const Field& f, std::span<const Elem> v) {
  return std::all_of(v.begin(), v.end(), [&](Elem e) { return f.contains(e); });
}

void hash_elems(Sha256& h, std::span<const Elem> v) {
  h.update_u32(static_cast<std::uint32_t>(v.size()));
  Bytes buf(v.size() * 4);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int k = 0; k < 4; ++k) buf[4 * i + k] = static_cast<std::uint8_t>(v[i] >> (8 * k));
  h.update(buf);
}

}  // namespace

const char* mode_name(ProofMode mode) { return mode == ProofMode::kZkboo ? "zkboo" : "zkbpp"; }

ProofMode parse_mode(std::string_view name) {
  if (name == "zkboo" || name == "ZKBoo") return ProofMode::kZkboo;
  if (name == "zkbpp" || name == "zkb++" || name == "ZKB++") return ProofMode::kZkbpp;
  throw std::invalid_argument("unknown proof mode '" + std::string(name) + "'");
}

const char* reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::kNone: return "accept";
    case RejectReason::kStructure: return "structure";
    case RejectReason::kChallengeMismatch: return "challenge-mismatch";
    case RejectReason::kCommitmentOpenFail: return "commitment-open-fail";
    case RejectReason::kRecMismatch: return "rec-mismatch";
    case RejectReason::kOutputMismatch: return "output-mismatch";
    case RejectReason::kWireMismatch: return "wire-mismatch";
  }
  return "?";
}

std::string Verdict::describe() const {
  if (accepted()) return "accept";
  std::string s = reason_name(reason);
  if (reason == RejectReason::kWireMismatch)
    s += "(" + std::to_string(iteration) + ", " + std::to_string(wire) + ")";
  if (!detail.empty()) s += ": " + detail;
  return s;
}

Digest commit(const Digest& randomizer, std::span<const std::uint8_t> payload) {
  Sha256 h(HashTag::kCommit);
  h.update(randomizer).update(payload);
  return h.finish();
}

bool open_commitment(const Digest& digest, const Digest& randomizer, std::span<const std::uint8_t> payload) {
  return commit(randomizer, payload) == digest;
}

std::vector<std::uint8_t> trits_from_bytes(std::span<const std::uint8_t> stream, std::size_t count) {
  std::vector<std::uint8_t> out;
  for (std::uint8_t byte : stream) {
    for (int shift = 6; shift >= 0 && out.size() < count; shift -= 2) {
      unsigned pair = (byte >> shift) & 3u;
      if (pair != 3) out.push_back(static_cast<std::uint8_t>(pair + 1));
    }
    if (out.size() == count) break;
  }
  return out;
}

std::vector<std::uint8_t> derive_challenge(std::span<const IterationBroadcast> broadcasts,
                                           std::span<const std::uint8_t> context, std::optional<std::size_t> count) {
  const std::size_t want = count.value_or(broadcasts.size());
  Sha256 h(HashTag::kFiatShamir);
  h.update_u32(static_cast<std::uint32_t>(context.size())).update(context);
  for (const auto& b : broadcasts) {
    for (const auto& y : b.output_shares) hash_elems(h, y);
    for (const auto& c : b.commitments) h.update(c);
  }
  const Digest first = h.finish();
  std::vector<std::uint8_t> trits = trits_from_bytes(first, want);
  for (std::uint64_t k = 1; trits.size() < want; ++k) {
    Sha256 ext(HashTag::kFiatShamir);
    ext.update(first).update_u64(k);
    Digest block = ext.finish();
    auto more = trits_from_bytes(block, want - trits.size());
    trits.insert(trits.end(), more.begin(), more.end());
  }
  return trits;
}

Bytes proof_context(const Circuit& circuit, std::span<const Elem> statement, ProofMode mode, std::uint32_t rounds) {
  Sha256 h(HashTag::kChallengeContext);
  h.update(circuit.digest()).update_u32(circuit.field().modulus());
  hash_elems(h, statement);
  h.update_u8(static_cast<std::uint8_t>(mode)).update_u32(rounds);
  Digest d = h.finish();
  return Bytes(d.begin(), d.end());
}

namespace zkboo_detail {

Bytes commitment_payload(const Field& field, ProofMode mode, const TapeSeed& seed, std::span<const Elem> tape,
                         std::span<const Elem> input_share, std::span<const Elem> mul_wires) {
  ByteWriter w;
  if (mode == ProofMode::kZkbpp) {
    w.raw(seed);
  } else {
    w.raw(pack(field, tape));
  }
  w.raw(pack(field, input_share));
  w.raw(pack(field, mul_wires));
  return std::move(w).take();
}

void write_elems(ByteWriter& w, const Field& field, std::span<const Elem> elems, bool with_count) {
  if (with_count) w.u32(static_cast<std::uint32_t>(elems.size()));
  w.raw(pack(field, elems));
}

std::vector<Elem> read_elems(ByteReader& r, const Field& field, std::optional<std::size_t> count) {
  std::size_t n = count ? *count : r.u32();
  std::size_t bytes = (n * field.element_bits() + 7) / 8;
  if (bytes > r.remaining()) throw DecodeError("element vector exceeds remaining input", DecodeFailure::kLength);
  return unpack(field, r.raw(bytes), n);
}

namespace {

template <bool Binary>
struct Ops {
  const Field& f;
  Elem add(Elem a, Elem b) const { return Binary ? (a ^ b) : f.add(a, b); }
  Elem sub(Elem a, Elem b) const { return Binary ? (a ^ b) : f.sub(a, b); }
  Elem mul(Elem a, Elem b) const { return Binary ? (a & b) : f.mul(a, b); }
  Elem linear(const Gate& g, Player j, const Elem* w) const {
    switch (g.kind) {
      case GateKind::kAddConst: return j == 1 ? add(w[g.a], g.constant) : w[g.a];
      case GateKind::kMulConst: return mul(w[g.a], g.constant);
      case GateKind::kAdd: return add(w[g.a], w[g.b]);
      default: return 0;
    }
  }
  Elem mul_share(const Gate& g, const Elem* wj, const Elem* wj1, Elem rj, Elem rj1) const {
    Elem a = wj[g.a], b = wj[g.b], a1 = wj1[g.a], b1 = wj1[g.b];
    return sub(add(add(add(mul(a, b), mul(a1, b)), mul(a, b1)), rj), rj1);
  }
};

template <bool Binary>
void run_players(const Circuit& circuit, std::array<std::vector<Elem>, 3>& wires,
                 const std::array<std::vector<Elem>, 3>& rand, std::array<std::vector<Elem>, 3>& mul_wires,
                 const CheatFault* fault) {
  Ops<Binary> ops{circuit.field()};
  const std::uint32_t m = circuit.input_count();
  std::uint32_t c = 0;
  Elem* w[3] = {wires[0].data(), wires[1].data(), wires[2].data()};
  for (const Gate& g : circuit.gates()) {
    if (g.kind != GateKind::kMul) {
      for (int p = 0; p < 3; ++p) w[p][g.out] = ops.linear(g, p + 1, w[p]);
      continue;
    }
    const std::size_t r = m + c;
    for (int p = 0; p < 3; ++p) {
      const int p1 = (p + 1) % 3;
      w[p][g.out] = ops.mul_share(g, w[p], w[p1], rand[p][r], rand[p1][r]);
    }
    if (fault && fault->mul_index == c) {
      Elem& v = w[fault->player - 1][g.out];
      v = ops.add(v, 1);
    }
    for (int p = 0; p < 3; ++p) mul_wires[p][c] = w[p][g.out];
    ++c;
  }
}

// Recomputes the wires of opened players e and e+1. Returns the first MUL
// wire whose committed value in view e disagrees with the recomputation.
template <bool Binary>
std::optional<WireId> replay_opened(const Circuit& circuit, Player e, std::vector<Elem>& we, std::vector<Elem>& we1,
                                    std::span<const Elem> rand_e, std::span<const Elem> rand_e1,
                                    std::span<const Elem> mul_e, std::span<const Elem> mul_e1) {
  Ops<Binary> ops{circuit.field()};
  const std::uint32_t m = circuit.input_count();
  const Player e1 = next_player(e);
  std::optional<WireId> mismatch;
  std::uint32_t c = 0;
  for (const Gate& g : circuit.gates()) {
    if (g.kind != GateKind::kMul) {
      we[g.out] = ops.linear(g, e, we.data());
      we1[g.out] = ops.linear(g, e1, we1.data());
      continue;
    }
    Elem recomputed = ops.mul_share(g, we.data(), we1.data(), rand_e[m + c], rand_e1[m + c]);
    if (!mismatch && recomputed != mul_e[c]) mismatch = g.out;
    we[g.out] = mul_e[c];
    we1[g.out] = mul_e1[c];
    ++c;
  }
  return mismatch;
}

}  // namespace

CommittedIteration commit_iteration(const Circuit& circuit, std::span<const Elem> witness, ProofMode mode, Drbg& rng,
                                    const CheatFault* fault) {
  const Field& f = circuit.field();
  const std::uint32_t m = circuit.input_count();
  const std::uint32_t nmul = circuit.mul_count();
  CommittedIteration it;
  std::array<std::vector<Elem>, 3> rand;
  for (auto& p : it.players) {
    p.seed = rng.bytes<16>();
    p.randomizer = rng.bytes<32>();
  }
  for (int p = 0; p < 3; ++p) rand[p] = Tape(it.players[p].seed, f).expand(m + nmul);

  std::array<std::vector<Elem>, 3> wires;
  std::array<std::vector<Elem>, 3> mul_wires;
  for (int p = 0; p < 3; ++p) {
    wires[p].assign(circuit.wire_count(), 0);
    mul_wires[p].assign(nmul, 0);
  }
  for (std::uint32_t i = 0; i < m; ++i) {
    wires[0][i] = rand[0][i];
    wires[1][i] = rand[1][i];
    wires[2][i] = f.sub(f.sub(witness[i], rand[0][i]), rand[1][i]);
  }
  if (f.is_binary()) run_players<true>(circuit, wires, rand, mul_wires, fault);
  else run_players<false>(circuit, wires, rand, mul_wires, fault);

  for (int p = 0; p < 3; ++p) {
    PlayerSecret& ps = it.players[p];
    ps.input_share.assign(wires[p].begin(), wires[p].begin() + m);
    ps.mul_wires = std::move(mul_wires[p]);
    auto& y = it.broadcast.output_shares[p];
    for (WireId w : circuit.outputs()) y.push_back(wires[p][w]);
    if (mode == ProofMode::kZkboo) ps.tape = std::move(rand[p]);
    Bytes payload = commitment_payload(f, mode, ps.seed, ps.tape, ps.input_share, ps.mul_wires);
    it.broadcast.commitments[p] = commit(ps.randomizer, payload);
  }
  return it;
}

IterationRecord open_iteration(CommittedIteration&& it, Player e, ProofMode mode) {
  IterationRecord rec;
  rec.broadcast = std::move(it.broadcast);
  const Player players[2] = {e, next_player(e)};
  for (int k = 0; k < 2; ++k) {
    PlayerSecret& ps = it.players[players[k] - 1];
    Opening& op = rec.openings[k];
    op.player = players[k];
    op.randomizer = ps.randomizer;
    op.mul_wires = std::move(ps.mul_wires);
    if (mode == ProofMode::kZkbpp) {
      op.seed = ps.seed;
      if (op.player == 3) op.input_share = std::move(ps.input_share);
    } else {
      op.tape = std::move(ps.tape);
      op.input_share = std::move(ps.input_share);
    }
  }
  return rec;
}

Verdict verify_iteration(const Circuit& circuit, std::span<const Elem> statement, ProofMode mode,
                         const IterationRecord& record, Player e, std::uint32_t index) {
  const Field& f = circuit.field();
  const std::uint32_t m = circuit.input_count();
  const std::uint32_t nmul = circuit.mul_count();
  const std::uint32_t l = circuit.output_count();
  const Player e1 = next_player(e);
  auto structure = [&](const std::string& what) {
    return Verdict::reject(RejectReason::kStructure, what, index);
  };
  if (record.openings[0].player != e || record.openings[1].player != e1)
    return Verdict::reject(RejectReason::kChallengeMismatch, "opened players do not match challenge", index);
  for (const auto& y : record.broadcast.output_shares)
    if (y.size() != l || !all_in_field(f, y)) return structure("output share has wrong shape");

  std::array<std::vector<Elem>, 2> rand;
  std::array<std::vector<Elem>, 2> inputs;
  for (int k = 0; k < 2; ++k) {
    const Opening& op = record.openings[k];
    if (op.mul_wires.size() != nmul || !all_in_field(f, op.mul_wires)) return structure("view has wrong shape");
    if (mode == ProofMode::kZkbpp) {
      rand[k] = Tape(op.seed, f).expand(m + nmul);
      if (op.player == 3) {
        inputs[k] = op.input_share;
      } else {
        if (!op.input_share.empty()) return structure("tape-derived input share must be omitted");
        inputs[k].assign(rand[k].begin(), rand[k].begin() + m);
      }
    } else {
      if (op.tape.size() != m + nmul || !all_in_field(f, op.tape)) return structure("tape has wrong length");
      rand[k] = op.tape;
      inputs[k] = op.input_share;
    }
    if (inputs[k].size() != m || !all_in_field(f, inputs[k])) return structure("input share has wrong shape");
    Bytes payload = commitment_payload(f, mode, op.seed, op.tape, inputs[k], op.mul_wires);
    if (!open_commitment(record.broadcast.commitments[op.player - 1], op.randomizer, payload))
      return Verdict::reject(RejectReason::kCommitmentOpenFail,
                             "player " + std::to_string(op.player) + " does not open its commitment", index);
  }

  const auto& ys = record.broadcast.output_shares;
  if (rec(f, ys[0], ys[1], ys[2]) != std::vector<Elem>(statement.begin(), statement.end()))
    return Verdict::reject(RejectReason::kRecMismatch, "output shares do not reconstruct the statement", index);

  std::vector<Elem> we(circuit.wire_count(), 0), we1(circuit.wire_count(), 0);
  std::copy(inputs[0].begin(), inputs[0].end(), we.begin());
  std::copy(inputs[1].begin(), inputs[1].end(), we1.begin());
  std::optional<WireId> mismatch =
      f.is_binary()
          ? replay_opened<true>(circuit, e, we, we1, rand[0], rand[1], record.openings[0].mul_wires,
                                record.openings[1].mul_wires)
          : replay_opened<false>(circuit, e, we, we1, rand[0], rand[1], record.openings[0].mul_wires,
                                 record.openings[1].mul_wires);

  for (std::uint32_t i = 0; i < l; ++i) {
    WireId w = circuit.outputs()[i];
    if (we[w] != ys[e - 1][i] || we1[w] != ys[e1 - 1][i])
      return Verdict::reject(RejectReason::kOutputMismatch, "opened view disagrees with its output share", index);
  }
  if (mismatch) return Verdict::reject(RejectReason::kWireMismatch, {}, index, *mismatch);
  return Verdict::accept();
}

void write_record(ByteWriter& w, const Field& field, ProofMode mode, const IterationRecord& rec, Player e) {
  w.u8(static_cast<std::uint8_t>(e));
  const int shares = mode == ProofMode::kZkbpp ? 2 : 3;
  for (int p = 0; p < shares; ++p) write_elems(w, field, rec.broadcast.output_shares[p], false);
  for (const auto& c : rec.broadcast.commitments) w.raw(c);
  for (const Opening& op : rec.openings) {
    w.u8(static_cast<std::uint8_t>(op.player));
    w.raw(op.randomizer);
    if (mode == ProofMode::kZkbpp) {
      w.raw(op.seed);
      if (op.player == 3) write_elems(w, field, op.input_share, true);
    } else {
      write_elems(w, field, op.tape, true);
      write_elems(w, field, op.input_share, true);
    }
    write_elems(w, field, op.mul_wires, true);
  }
}

IterationRecord read_record(ByteReader& r, const Field& field, ProofMode mode, std::span<const Elem> statement,
                            Player& e) {
  IterationRecord rec;
  e = r.u8();
  if (e < 1 || e > 3) throw DecodeError("challenge trit out of range");
  const std::size_t l = statement.size();
  const int shares = mode == ProofMode::kZkbpp ? 2 : 3;
  for (int p = 0; p < shares; ++p) rec.broadcast.output_shares[p] = read_elems(r, field, l);
  if (mode == ProofMode::kZkbpp) {
    auto& y = rec.broadcast.output_shares;
    y[2].resize(l);
    for (std::size_t i = 0; i < l; ++i) y[2][i] = field.sub(field.sub(statement[i], y[0][i]), y[1][i]);
  }
  for (auto& c : rec.broadcast.commitments) c = r.fixed<32>();
  for (Opening& op : rec.openings) {
    op.player = r.u8();
    if (op.player < 1 || op.player > 3) throw DecodeError("player index out of range");
    op.randomizer = r.fixed<32>();
    if (mode == ProofMode::kZkbpp) {
      op.seed = r.fixed<16>();
      if (op.player == 3) op.input_share = read_elems(r, field, std::nullopt);
    } else {
      op.tape = read_elems(r, field, std::nullopt);
      op.input_share = read_elems(r, field, std::nullopt);
    }
    op.mul_wires = read_elems(r, field, std::nullopt);
  }
  return rec;
}

}  // namespace zkboo_detail

namespace {

ProofBundle prove_impl(const Circuit& circuit, std::span<const Elem> statement, std::span<const Elem> witness,
                       std::uint32_t rounds, ProofMode mode, std::span<const std::uint8_t> rng_seed,
                       const CheatFault* fault, unsigned threads) {
  if (rounds == 0) throw std::invalid_argument("proof needs at least one round");
  if (witness.size() != circuit.input_count()) throw StatementMismatch("witness length does not match circuit");
  if (statement.size() != circuit.output_count()) throw StatementMismatch("statement length does not match circuit");
  Drbg root(rng_seed);
  std::vector<zkboo_detail::CommittedIteration> committed(rounds);
  parallel_for(rounds, threads, [&](std::uint32_t i) {
    Drbg rng = root.fork(i);
    committed[i] = zkboo_detail::commit_iteration(circuit, witness, mode, rng, fault);
  });
  std::vector<IterationBroadcast> broadcasts;
  broadcasts.reserve(rounds);
  for (const auto& c : committed) broadcasts.push_back(c.broadcast);

  ProofBundle bundle;
  bundle.mode = mode;
  bundle.rounds = rounds;
  bundle.modulus = circuit.field().modulus();
  bundle.circuit_digest = circuit.digest();
  bundle.statement.assign(statement.begin(), statement.end());
  bundle.challenge = derive_challenge(broadcasts, proof_context(circuit, statement, mode, rounds));
  bundle.iterations.reserve(rounds);
  for (std::uint32_t i = 0; i < rounds; ++i)
    bundle.iterations.push_back(zkboo_detail::open_iteration(std::move(committed[i]), bundle.challenge[i], mode));
  return bundle;
}

}  // namespace

ProofBundle prove(const Circuit& circuit, std::span<const Elem> statement, std::span<const Elem> witness,
                  std::uint32_t rounds, ProofMode mode, std::span<const std::uint8_t> rng_seed,
                  const ProveOptions& options) {
  if (evaluate(circuit, witness) != std::vector<Elem>(statement.begin(), statement.end()))
    throw StatementMismatch("witness does not satisfy the statement");
  return prove_impl(circuit, statement, witness, rounds, mode, rng_seed, nullptr, options.threads);
}

ProofBundle prove_cheating(const Circuit& circuit, std::span<const Elem> claimed_statement,
                           std::span<const Elem> witness, std::uint32_t rounds, ProofMode mode,
                           std::span<const std::uint8_t> rng_seed, const CheatFault& fault) {
  if (fault.player < 1 || fault.player > 3 || fault.mul_index >= circuit.mul_count())
    throw std::invalid_argument("cheat fault does not address a MUL gate share");
  return prove_impl(circuit, claimed_statement, witness, rounds, mode, rng_seed, &fault, 1);
}

Verdict verify(const Circuit& circuit, std::span<const Elem> statement, const ProofBundle& bundle, unsigned threads) {
  if (bundle.rounds == 0 || bundle.iterations.size() != bundle.rounds || bundle.challenge.size() != bundle.rounds)
    return Verdict::reject(RejectReason::kStructure, "round count inconsistent");
  if (bundle.modulus != circuit.field().modulus() || bundle.circuit_digest != circuit.digest())
    return Verdict::reject(RejectReason::kStructure, "proof is for a different circuit");
  if (statement.size() != circuit.output_count())
    return Verdict::reject(RejectReason::kStructure, "statement length does not match circuit");
  if (!std::ranges::equal(bundle.statement, statement))
    return Verdict::reject(RejectReason::kStructure, "embedded statement differs");

  std::vector<IterationBroadcast> broadcasts;
  broadcasts.reserve(bundle.rounds);
  for (const auto& it : bundle.iterations) broadcasts.push_back(it.broadcast);
  auto challenge = derive_challenge(broadcasts, proof_context(circuit, statement, bundle.mode, bundle.rounds));
  if (challenge != bundle.challenge)
    return Verdict::reject(RejectReason::kChallengeMismatch, "recomputed challenge differs");

  std::vector<Verdict> results(bundle.rounds);
  parallel_for(bundle.rounds, threads, [&](std::uint32_t i) {
    results[i] = zkboo_detail::verify_iteration(circuit, statement, bundle.mode, bundle.iterations[i], challenge[i], i);
  });
  for (auto& v : results)
    if (!v.accepted()) return v;
  return Verdict::accept();
}

Bytes serialize(const ProofBundle& bundle) {
  const Field field(bundle.modulus);
  ByteWriter w;
  w.raw(kProofMagic);
  w.u16(kProofVersion);
  w.u8(static_cast<std::uint8_t>(bundle.mode));
  w.u32(bundle.rounds);
  w.raw(bundle.circuit_digest);
  ByteWriter stmt;
  stmt.u32(bundle.modulus);
  zkboo_detail::write_elems(stmt, field, bundle.statement, true);
  w.blob(stmt.bytes());
  for (std::size_t i = 0; i < bundle.iterations.size(); ++i) {
    ByteWriter rec;
    zkboo_detail::write_record(rec, field, bundle.mode, bundle.iterations[i], bundle.challenge.at(i));
    w.blob(rec.bytes());
  }
  Digest trailer = tagged_hash(HashTag::kProofTrailer, w.bytes());
  w.raw(trailer);
  return std::move(w).take();
}

ProofBundle deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kProofMagic.size() || !std::equal(kProofMagic.begin(), kProofMagic.end(), bytes.begin()))
    throw DecodeError("proof magic mismatch", DecodeFailure::kMagic);
  if (bytes.size() < 32 + kProofMagic.size()) throw DecodeError("truncated proof", DecodeFailure::kTruncated);
  auto body = bytes.first(bytes.size() - 32);
  ByteReader r(body);
  r.raw(kProofMagic.size());
  if (r.u16() != kProofVersion) throw DecodeError("unsupported proof version", DecodeFailure::kVersion);
  ProofBundle b;
  std::uint8_t mode = r.u8();
  if (mode > 1) throw DecodeError("unknown proof mode");
  b.mode = static_cast<ProofMode>(mode);
  b.rounds = r.u32();
  if (b.rounds == 0) throw DecodeError("proof declares zero rounds");
  b.circuit_digest = r.fixed<32>();
  {
    ByteReader s(r.blob());
    b.modulus = s.u32();
    Field field = [&] {
      try {
        return Field(b.modulus);
      } catch (const std::exception&) {
        throw DecodeError("invalid field modulus");
      }
    }();
    b.statement = zkboo_detail::read_elems(s, field, std::nullopt);
    if (!s.done()) throw DecodeError("trailing bytes in statement");
  }
  const Field field(b.modulus);
  // Each record is at least 4 bytes of length prefix.
  if (b.rounds > r.remaining() / 4) throw DecodeError("round count exceeds input", DecodeFailure::kLength);
  for (std::uint32_t i = 0; i < b.rounds; ++i) {
    ByteReader rec(r.blob());
    Player e = 1;
    b.iterations.push_back(zkboo_detail::read_record(rec, field, b.mode, b.statement, e));
    b.challenge.push_back(static_cast<std::uint8_t>(e));
    if (!rec.done()) throw DecodeError("trailing bytes in iteration record");
  }
  if (!r.done()) throw DecodeError("trailing bytes after last iteration");
  Digest expected = tagged_hash(HashTag::kProofTrailer, body);
  if (!std::equal(expected.begin(), expected.end(), bytes.end() - 32))
    throw DecodeError("proof hash mismatch", DecodeFailure::kChecksum);
  return b;
}

}  // namespace pqvrf
