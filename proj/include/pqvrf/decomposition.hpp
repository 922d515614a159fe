#pragma once

// Linear (2,3)-decomposition of a circuit: three simulated players, each
// holding an additive share of every wire.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pqvrf/circuit.hpp"

namespace pqvrf {

/// Players are numbered 1, 2, 3 and wrap around (3 + 1 -> 1).
using Player = int;
constexpr Player next_player(Player j) { return j % 3 + 1; }

/// Seeded pseudorandom element stream. Elements come from
/// H(kTape || seed || block) in blocks of 256 bits (GF(2)) or four 64-bit
/// words reduced mod q (prime fields).
class Tape {
 public:
  Tape(const TapeSeed& seed, Field field);

  const TapeSeed& seed() const { return seed_; }
  const Field& field() const { return field_; }

  /// Lazily expands the stream up to index i.
  Elem element(std::size_t i);
  /// The first `count` elements, independent of the lazy cache.
  std::vector<Elem> expand(std::size_t count) const;

 private:
  void append_block(std::vector<Elem>& out, std::uint64_t block) const;

  TapeSeed seed_;
  Field field_;
  std::vector<Elem> cache_;
};

inline constexpr Elem kUnsetWire = 0xFFFFFFFFu;

/// One player's view: a value per wire (kUnsetWire until computed). The
/// first m entries are the player's input share.
struct View {
  std::vector<Elem> wires;

  std::span<const Elem> input_share(std::uint32_t m) const { return std::span(wires).first(m); }
  bool has(WireId w) const { return w < wires.size() && wires[w] != kUnsetWire; }
  friend bool operator==(const View&, const View&) = default;
};

struct DecompositionRun {
  std::array<Tape, 3> tapes;
  std::array<View, 3> views;
  std::array<std::vector<Elem>, 3> output_shares;
};

class DecompositionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// w1, w2 are the first m elements of tapes 1 and 2; w3 = w - w1 - w2.
std::array<std::vector<Elem>, 3> share(const Field& field, std::span<const Elem> witness, std::span<Tape, 3> tapes);

/// Player j's share of a gate's output wire, given the wire values of
/// players j and j+1 and (for MUL gates) the two tape elements assigned to
/// this gate. No bounds or presence checks.
inline Elem gate_share(const Field& f, const Gate& g, Player j, const Elem* wires_j, const Elem* wires_j1,
                       Elem rand_j, Elem rand_j1) {
  switch (g.kind) {
    case GateKind::kAddConst: return j == 1 ? f.add(wires_j[g.a], g.constant) : wires_j[g.a];
    case GateKind::kMulConst: return f.mul(wires_j[g.a], g.constant);
    case GateKind::kAdd: return f.add(wires_j[g.a], wires_j[g.b]);
    case GateKind::kMul: {
      Elem a = wires_j[g.a], b = wires_j[g.b];
      Elem a1 = wires_j1[g.a], b1 = wires_j1[g.b];
      Elem v = f.add(f.add(f.mul(a, b), f.mul(a1, b)), f.mul(a, b1));
      return f.sub(f.add(v, rand_j), rand_j1);
    }
  }
  return 0;
}

/// Checked form of the gate update: reads the MUL randomness at stream
/// position `m + mul_index` of both tapes and throws DecompositionError if an
/// input wire of either view has not been computed yet.
Elem update_gate(const Field& field, const Gate& gate, Player j, const View& view_j, const View& view_j1, Tape& tape_j,
                 Tape& tape_j1, std::uint32_t input_count, std::uint32_t mul_index);

DecompositionRun run_decomposition(const Circuit& circuit, std::span<const Elem> witness, std::array<Tape, 3> tapes);

/// Output(view): the output wires as stored in the view.
std::vector<Elem> output_shares_of(const Circuit& circuit, const View& view);

/// Componentwise sum of three share vectors.
std::vector<Elem> rec(const Field& field, std::span<const Elem> y1, std::span<const Elem> y2, std::span<const Elem> y3);

class TranscriptMismatch : public std::runtime_error {
 public:
  explicit TranscriptMismatch(WireId wire);
  WireId wire() const { return wire_; }

 private:
  WireId wire_;
};

/// Sums the three views wire by wire and checks the result against plain
/// evaluation of the reconstructed witness; throws TranscriptMismatch naming
/// the first offending wire.
std::vector<Elem> reconstruct_wire_transcript(const DecompositionRun& run, const Circuit& circuit);

}  // namespace pqvrf
