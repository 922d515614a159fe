#include "pqvrf/decomposition.hpp"

#include <openssl/sha.h>

#include <cstring>
#include <string>

#include "pqvrf/hash.hpp"

namespace pqvrf {

Tape::Tape(const TapeSeed& seed, Field field) : seed_(seed), field_(field) {}

void Tape::append_block(std::vector<Elem>& out, std::uint64_t block) const {
  std::uint8_t buf[1 + 16 + 8];
  buf[0] = static_cast<std::uint8_t>(HashTag::kTape);
  std::memcpy(buf + 1, seed_.data(), 16);
  for (int i = 0; i < 8; ++i) buf[17 + i] = static_cast<std::uint8_t>(block >> (8 * i));
  std::uint8_t d[32];
  SHA256(buf, sizeof buf, d);
  if (field_.is_binary()) {
    for (int i = 0; i < 256; ++i) out.push_back((d[i / 8] >> (7 - i % 8)) & 1u);
  } else {
    for (int w = 0; w < 4; ++w) {
      std::uint64_t v = 0;
      for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(d[8 * w + i]) << (8 * i);
      out.push_back(field_.reduce(v));
    }
  }
}

Elem Tape::element(std::size_t i) {
  while (cache_.size() <= i) append_block(cache_, cache_.size() / (field_.is_binary() ? 256 : 4));
  return cache_[i];
}

std::vector<Elem> Tape::expand(std::size_t count) const {
  const std::size_t per_block = field_.is_binary() ? 256 : 4;
  std::vector<Elem> out;
  out.reserve(count + per_block);
  for (std::uint64_t b = 0; out.size() < count; ++b) append_block(out, b);
  out.resize(count);
  return out;
}

std::array<std::vector<Elem>, 3> share(const Field& f, std::span<const Elem> witness, std::span<Tape, 3> tapes) {
  const std::size_t m = witness.size();
  std::array<std::vector<Elem>, 3> out;
  out[0] = tapes[0].expand(m);
  out[1] = tapes[1].expand(m);
  out[2].resize(m);
  for (std::size_t i = 0; i < m; ++i) out[2][i] = f.sub(f.sub(witness[i], out[0][i]), out[1][i]);
  return out;
}

Elem update_gate(const Field& field, const Gate& gate, Player j, const View& view_j, const View& view_j1, Tape& tape_j,
                 Tape& tape_j1, std::uint32_t input_count, std::uint32_t mul_index) {
  auto require = [&](const View& v, WireId w, Player who) {
    if (!v.has(w))
      throw DecompositionError("wire " + std::to_string(w) + " not yet computed for player " + std::to_string(who));
  };
  require(view_j, gate.a, j);
  if (!gate.has_constant()) require(view_j, gate.b, j);
  Elem rj = 0, rj1 = 0;
  if (gate.kind == GateKind::kMul) {
    require(view_j1, gate.a, next_player(j));
    require(view_j1, gate.b, next_player(j));
    rj = tape_j.element(input_count + mul_index);
    rj1 = tape_j1.element(input_count + mul_index);
  }
  return gate_share(field, gate, j, view_j.wires.data(), view_j1.wires.data(), rj, rj1);
}

DecompositionRun run_decomposition(const Circuit& circuit, std::span<const Elem> witness, std::array<Tape, 3> tapes) {
  const Field& f = circuit.field();
  const std::uint32_t m = circuit.input_count();
  if (witness.size() != m)
    throw CircuitError("witness has " + std::to_string(witness.size()) + " elements, circuit expects " +
                       std::to_string(m));
  for (Elem e : witness)
    if (!f.contains(e)) throw CircuitError("witness element not reduced mod q");

  std::array<std::vector<Elem>, 3> rand;
  for (int p = 0; p < 3; ++p) rand[p] = tapes[p].expand(m + circuit.mul_count());
  auto shares = share(f, witness, std::span<Tape, 3>(tapes));

  DecompositionRun run{tapes, {}, {}};
  for (int p = 0; p < 3; ++p) {
    run.views[p].wires.assign(circuit.wire_count(), kUnsetWire);
    std::copy(shares[p].begin(), shares[p].end(), run.views[p].wires.begin());
  }
  std::uint32_t mul_index = 0;
  for (const Gate& g : circuit.gates()) {
    const std::size_t r = m + mul_index;
    for (int p = 0; p < 3; ++p) {
      const int p1 = (p + 1) % 3;
      run.views[p].wires[g.out] = gate_share(f, g, p + 1, run.views[p].wires.data(), run.views[p1].wires.data(),
                                             rand[p][r], rand[p1][r]);
    }
    if (g.kind == GateKind::kMul) ++mul_index;
  }
  for (int p = 0; p < 3; ++p) run.output_shares[p] = output_shares_of(circuit, run.views[p]);
  return run;
}

std::vector<Elem> output_shares_of(const Circuit& circuit, const View& view) {
  std::vector<Elem> out;
  out.reserve(circuit.output_count());
  for (WireId w : circuit.outputs()) out.push_back(view.wires.at(w));
  return out;
}

std::vector<Elem> rec(const Field& f, std::span<const Elem> y1, std::span<const Elem> y2, std::span<const Elem> y3) {
  if (y1.size() != y2.size() || y2.size() != y3.size()) throw std::invalid_argument("rec: share length mismatch");
  std::vector<Elem> out(y1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.add(f.add(y1[i], y2[i]), y3[i]);
  return out;
}

TranscriptMismatch::TranscriptMismatch(WireId wire)
    : std::runtime_error("wire transcript mismatch at wire " + std::to_string(wire)), wire_(wire) {}

std::vector<Elem> reconstruct_wire_transcript(const DecompositionRun& run, const Circuit& circuit) {
  const Field& f = circuit.field();
  const std::uint32_t wires = circuit.wire_count();
  std::vector<Elem> summed(wires);
  for (WireId w = 0; w < wires; ++w) {
    for (const View& v : run.views)
      if (!v.has(w)) throw TranscriptMismatch(w);
    summed[w] = f.add(f.add(run.views[0].wires[w], run.views[1].wires[w]), run.views[2].wires[w]);
  }
  auto expected = evaluate_wires(circuit, std::span(summed).first(circuit.input_count()));
  for (WireId w = 0; w < wires; ++w)
    if (summed[w] != expected[w]) throw TranscriptMismatch(w);
  return summed;
}

}  // namespace pqvrf
