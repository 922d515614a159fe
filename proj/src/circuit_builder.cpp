#include "pqvrf/circuit_builder.hpp"

#include <algorithm>

namespace pqvrf {

CircuitBuilder::CircuitBuilder(Field field, std::uint32_t input_count) : field_(field), inputs_(input_count) {}

Value CircuitBuilder::input(std::uint32_t i) const {
  if (i >= inputs_) throw CircuitError("builder input index out of range");
  return Value::of_wire(i);
}

Value CircuitBuilder::emit(GateKind kind, WireId a, WireId b, Elem c) {
  Gate g;
  g.kind = kind;
  g.a = a;
  g.b = b;
  g.constant = c;
  g.out = inputs_ + static_cast<WireId>(gates_.size());
  gates_.push_back(g);
  return Value::of_wire(g.out);
}

Value CircuitBuilder::add(Value a, Value b) {
  if (a.is_const && b.is_const) return Value::of_const(field_.add(a.constant, b.constant));
  if (a.is_const) std::swap(a, b);
  if (b.is_const) return add_const(a, b.constant);
  return emit(GateKind::kAdd, a.wire, b.wire, 0);
}

Value CircuitBuilder::mul(Value a, Value b) {
  if (a.is_const && b.is_const) return Value::of_const(field_.mul(a.constant, b.constant));
  if (a.is_const) std::swap(a, b);
  if (b.is_const) return mul_const(a, b.constant);
  return emit(GateKind::kMul, a.wire, b.wire, 0);
}

Value CircuitBuilder::add_const(Value a, Elem c) {
  c = field_.reduce(c);
  if (a.is_const) return Value::of_const(field_.add(a.constant, c));
  if (c == 0) return a;
  return emit(GateKind::kAddConst, a.wire, 0, c);
}

Value CircuitBuilder::mul_const(Value a, Elem c) {
  c = field_.reduce(c);
  if (a.is_const) return Value::of_const(field_.mul(a.constant, c));
  if (c == 0) return Value::of_const(0);
  if (c == 1) return a;
  return emit(GateKind::kMulConst, a.wire, 0, c);
}

WireId CircuitBuilder::zero_wire() {
  if (!zero_) {
    if (inputs_ == 0) throw CircuitError("cannot materialize a constant in a circuit without inputs");
    zero_ = emit(GateKind::kMulConst, 0, 0, 0).wire;
  }
  return *zero_;
}

Circuit CircuitBuilder::build(const std::vector<Value>& outputs) && {
  std::vector<WireId> out_wires;
  out_wires.reserve(outputs.size());
  for (const Value& v : outputs) {
    if (!v.is_const) {
      out_wires.push_back(v.wire);
    } else {
      WireId z = zero_wire();
      out_wires.push_back(v.constant == 0 ? z : emit(GateKind::kAddConst, z, 0, v.constant).wire);
    }
  }
  return Circuit(field_, inputs_, std::move(out_wires), std::move(gates_));
}

Word32 word_const(std::uint32_t v) {
  Word32 w;
  for (unsigned i = 0; i < 32; ++i) w[i] = Value::of_const((v >> i) & 1u);
  return w;
}

Word32 word_xor(CircuitBuilder& b, const Word32& x, const Word32& y) {
  Word32 r;
  for (unsigned i = 0; i < 32; ++i) r[i] = b.add(x[i], y[i]);
  return r;
}

Word32 word_and(CircuitBuilder& b, const Word32& x, const Word32& y) {
  Word32 r;
  for (unsigned i = 0; i < 32; ++i) r[i] = b.mul(x[i], y[i]);
  return r;
}

Word32 word_not(CircuitBuilder& b, const Word32& x) {
  Word32 r;
  for (unsigned i = 0; i < 32; ++i) r[i] = b.add_const(x[i], 1);
  return r;
}

Word32 word_rotr(const Word32& x, unsigned n) {
  Word32 r;
  for (unsigned i = 0; i < 32; ++i) r[i] = x[(i + n) % 32];
  return r;
}

Word32 word_shr(const Word32& x, unsigned n) {
  Word32 r;
  for (unsigned i = 0; i < 32; ++i) r[i] = i + n < 32 ? x[i + n] : Value::of_const(0);
  return r;
}

Word32 word_add(CircuitBuilder& b, const Word32& x, const Word32& y) {
  Word32 r;
  Value carry = Value::of_const(0);
  for (unsigned i = 0; i < 32; ++i) {
    Value xc = b.add(x[i], carry);
    r[i] = b.add(xc, y[i]);
    if (i == 31) break;
    // carry' = ((x ^ c) & (y ^ c)) ^ c
    carry = b.add(b.mul(xc, b.add(y[i], carry)), carry);
  }
  return r;
}

namespace {

constexpr std::uint32_t kK[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

// Big-endian word starting at input bit `offset`.
Word32 input_word(const CircuitBuilder& b, std::uint32_t offset) {
  Word32 w;
  for (unsigned i = 0; i < 32; ++i) w[i] = b.input(offset + 31 - i);
  return w;
}

}  // namespace

Circuit build_sha256_compression_circuit() {
  CircuitBuilder b(Field::binary(), 768);
  std::array<Word32, 64> w;
  for (unsigned i = 0; i < 16; ++i) w[i] = input_word(b, 32 * i);
  for (unsigned i = 16; i < 64; ++i) {
    Word32 s0 = word_xor(b, word_xor(b, word_rotr(w[i - 15], 7), word_rotr(w[i - 15], 18)), word_shr(w[i - 15], 3));
    Word32 s1 = word_xor(b, word_xor(b, word_rotr(w[i - 2], 17), word_rotr(w[i - 2], 19)), word_shr(w[i - 2], 10));
    w[i] = word_add(b, word_add(b, w[i - 16], s0), word_add(b, w[i - 7], s1));
  }
  std::array<Word32, 8> cv;
  for (unsigned i = 0; i < 8; ++i) cv[i] = input_word(b, 512 + 32 * i);
  auto [a, bb, c, d, e, f, g, h] = cv;
  for (unsigned i = 0; i < 64; ++i) {
    Word32 s1 = word_xor(b, word_xor(b, word_rotr(e, 6), word_rotr(e, 11)), word_rotr(e, 25));
    // ch = (e & (f ^ g)) ^ g
    Word32 ch = word_xor(b, word_and(b, e, word_xor(b, f, g)), g);
    Word32 t1 = word_add(b, word_add(b, h, s1), word_add(b, ch, word_add(b, word_const(kK[i]), w[i])));
    Word32 s0 = word_xor(b, word_xor(b, word_rotr(a, 2), word_rotr(a, 13)), word_rotr(a, 22));
    // maj = ((a ^ b) & (a ^ c)) ^ a
    Word32 maj = word_xor(b, word_and(b, word_xor(b, a, bb), word_xor(b, a, c)), a);
    Word32 t2 = word_add(b, s0, maj);
    h = g;
    g = f;
    f = e;
    e = word_add(b, d, t1);
    d = c;
    c = bb;
    bb = a;
    a = word_add(b, t1, t2);
  }
  std::array<Word32, 8> fin = {a, bb, c, d, e, f, g, h};
  std::vector<Value> outputs;
  outputs.reserve(256);
  for (unsigned i = 0; i < 8; ++i) {
    Word32 r = word_add(b, cv[i], fin[i]);
    for (unsigned j = 0; j < 32; ++j) outputs.push_back(r[31 - j]);
  }
  return std::move(b).build(outputs);
}

const Circuit& sha256_compression_circuit() {
  static const Circuit circuit = build_sha256_compression_circuit();
  return circuit;
}

}  // namespace pqvrf
