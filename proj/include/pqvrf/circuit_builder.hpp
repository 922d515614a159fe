#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pqvrf/circuit.hpp"

namespace pqvrf {

/// Either a circuit wire or a known constant. Constants never reach the gate
/// list unless they have to be materialized as outputs.
struct Value {
  bool is_const = true;
  WireId wire = 0;
  Elem constant = 0;

  static Value of_wire(WireId w) { return {false, w, 0}; }
  static Value of_const(Elem c) { return {true, 0, c}; }
};

/// Incremental circuit construction with constant folding.
class CircuitBuilder {
 public:
  CircuitBuilder(Field field, std::uint32_t input_count);

  const Field& field() const { return field_; }
  Value input(std::uint32_t i) const;

  Value add(Value a, Value b);
  Value mul(Value a, Value b);
  Value add_const(Value a, Elem c);
  Value mul_const(Value a, Elem c);
  Value sub(Value a, Value b) { return add(a, mul_const(b, field_.neg(1))); }

  std::size_t gate_count() const { return gates_.size(); }

  /// Constant outputs are materialized as `MULC in0 0` followed by `ADDC`.
  Circuit build(const std::vector<Value>& outputs) &&;

 private:
  Value emit(GateKind kind, WireId a, WireId b, Elem c);
  WireId zero_wire();

  Field field_;
  std::uint32_t inputs_;
  std::vector<Gate> gates_;
  std::optional<WireId> zero_;
};

/// 32-bit word over GF(2); index 0 is the least significant bit.
using Word32 = std::array<Value, 32>;

Word32 word_const(std::uint32_t v);
Word32 word_xor(CircuitBuilder& b, const Word32& x, const Word32& y);
Word32 word_and(CircuitBuilder& b, const Word32& x, const Word32& y);
Word32 word_not(CircuitBuilder& b, const Word32& x);
Word32 word_rotr(const Word32& x, unsigned n);
Word32 word_shr(const Word32& x, unsigned n);
/// Addition mod 2^32 with a ripple carry; one AND per bit.
Word32 word_add(CircuitBuilder& b, const Word32& x, const Word32& y);

/// Builds the SHA-256 compression function as a Boolean circuit.
///
/// Inputs: 768 bits = 512-bit message block followed by the 256-bit chaining
/// value, both in big-endian bit order (MSB of byte 0 first). Outputs: the
/// 256-bit next chaining value in the same order.
Circuit build_sha256_compression_circuit();

/// Process-wide cached instance of build_sha256_compression_circuit().
const Circuit& sha256_compression_circuit();

}  // namespace pqvrf
