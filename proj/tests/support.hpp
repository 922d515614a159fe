#pragma once

// Circuits and generators shared by the unit and acceptance tests.

#include <string>
#include <vector>

#include "pqvrf/circuit.hpp"
#include "pqvrf/circuit_builder.hpp"
#include "pqvrf/hash.hpp"

namespace pqvrf::testing {

inline Circuit and_circuit() { return load_circuit("2 1 1\n2\nAND 0 1 2\n"); }

// [x < y] for two unsigned 32-bit words; inputs are x then y, LSB first.
// Computes the carry out of x + ~y + 1, which is 0 exactly when x < y.
inline Circuit comparator_circuit() {
  CircuitBuilder b(Field::binary(), 64);
  Value carry = Value::of_const(1);
  for (std::uint32_t i = 0; i < 32; ++i) {
    Value x = b.input(i);
    Value ny = b.add_const(b.input(32 + i), 1);
    carry = b.add(b.mul(b.add(x, carry), b.add(ny, carry)), carry);
  }
  return std::move(b).build({b.add_const(carry, 1)});
}

inline std::vector<Elem> word_bits_lsb(std::uint32_t v) {
  std::vector<Elem> out(32);
  for (int i = 0; i < 32; ++i) out[i] = (v >> i) & 1u;
  return out;
}

// Random topologically ordered circuit with `gates` gates; constants and
// wire choices are uniform. Outputs are the last min(4, gates) wires plus one
// input wire.
inline Circuit random_circuit(Drbg& rng, Field f, std::uint32_t inputs, std::uint32_t gates) {
  std::vector<Gate> list;
  for (std::uint32_t i = 0; i < gates; ++i) {
    Gate g;
    WireId out = inputs + i;
    g.out = out;
    g.kind = static_cast<GateKind>(rng.uniform(4));
    g.a = static_cast<WireId>(rng.uniform(out));
    if (g.has_constant()) g.constant = static_cast<Elem>(rng.uniform(f.modulus()));
    else g.b = static_cast<WireId>(rng.uniform(out));
    list.push_back(g);
  }
  std::vector<WireId> outputs;
  const std::uint32_t wires = inputs + gates;
  for (std::uint32_t k = std::min<std::uint32_t>(4, gates); k > 0; --k) outputs.push_back(wires - k);
  outputs.push_back(static_cast<WireId>(rng.uniform(inputs)));
  return Circuit(f, inputs, outputs, list);
}

inline std::vector<Elem> random_elems(Drbg& rng, Field f, std::size_t n) {
  std::vector<Elem> out(n);
  for (auto& e : out) e = static_cast<Elem>(rng.uniform(f.modulus()));
  return out;
}

inline Bytes seed_bytes(std::uint64_t seed) {
  Bytes out(8);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  return out;
}


// Small 8-bit one-way-ish mixers standing in for F and H2 in the equality
// proof tests: out_i = s_i ^ (s_{i+a} & s_{i+b}) ^ key_i.
inline Circuit toy_mixer(std::uint8_t key, unsigned a, unsigned b) {
  CircuitBuilder cb(Field::binary(), 8);
  std::vector<Value> out;
  for (unsigned i = 0; i < 8; ++i) {
    Value v = cb.add(cb.input(i), cb.mul(cb.input((i + a) % 8), cb.input((i + b) % 8)));
    out.push_back(cb.add_const(v, (key >> i) & 1u));
  }
  return std::move(cb).build(out);
}

}  // namespace pqvrf::testing
