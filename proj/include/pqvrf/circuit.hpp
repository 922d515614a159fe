#pragma once

// Gate-list circuits over GF(2) or a small prime field.
//
// Wires 0..m-1 are the inputs; every gate writes one fresh wire, and a gate
// may only read wires with smaller indices that were written before it.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pqvrf/bytes.hpp"

namespace pqvrf {

using Elem = std::uint32_t;
using WireId = std::uint32_t;

/// Prime field Z_q with q < 2^31 (q = 2 is the Boolean case).
class Field {
 public:
  constexpr Field() = default;
  explicit Field(std::uint32_t modulus);

  static Field binary() { return Field(2); }

  std::uint32_t modulus() const { return q_; }
  bool is_binary() const { return q_ == 2; }
  /// Bits needed to store one reduced element.
  unsigned element_bits() const { return bits_; }

  Elem add(Elem a, Elem b) const {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + q_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : q_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % q_);
  }
  Elem reduce(std::uint64_t v) const { return static_cast<Elem>(v % q_); }
  bool contains(Elem a) const { return a < q_; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint32_t q_ = 2;
  unsigned bits_ = 1;
};

enum class GateKind : std::uint8_t { kAddConst, kMulConst, kAdd, kMul };

struct Gate {
  GateKind kind = GateKind::kAdd;
  WireId a = 0;
  WireId b = 0;         // second input for kAdd / kMul
  Elem constant = 0;    // for kAddConst / kMulConst
  WireId out = 0;

  bool is_linear() const { return kind != GateKind::kMul; }
  bool has_constant() const { return kind == GateKind::kAddConst || kind == GateKind::kMulConst; }
  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Raised for structurally invalid circuits and for parse failures; `line()`
/// is 0 when the error is not tied to a text line.
class CircuitError : public std::runtime_error {
 public:
  CircuitError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class Circuit {
 public:
  /// Validates topology and field membership of constants; throws CircuitError.
  Circuit(Field field, std::uint32_t input_count, std::vector<WireId> outputs, std::vector<Gate> gates);

  const Field& field() const { return field_; }
  std::uint32_t input_count() const { return inputs_; }
  std::uint32_t output_count() const { return static_cast<std::uint32_t>(outputs_.size()); }
  std::uint32_t wire_count() const { return inputs_ + static_cast<std::uint32_t>(gates_.size()); }
  std::uint32_t mul_count() const { return muls_; }
  std::span<const WireId> outputs() const { return outputs_; }
  std::span<const Gate> gates() const { return gates_; }
  /// Canonical hash of (field, shape, gate list); binds proofs to the relation.
  const Digest& digest() const { return digest_; }

 private:
  Field field_;
  std::uint32_t inputs_;
  std::vector<WireId> outputs_;
  std::vector<Gate> gates_;
  std::uint32_t muls_ = 0;
  Digest digest_{};
};

/// Plain straight-line evaluation; returns the output wire values.
std::vector<Elem> evaluate(const Circuit& circuit, std::span<const Elem> input);
/// Same, but returns every wire value (indexed by wire id).
std::vector<Elem> evaluate_wires(const Circuit& circuit, std::span<const Elem> input);

/// Parses the textual gate-list format:
///   line 1: `m l n q` (q may be omitted, defaulting to 2)
///   line 2: l output wire indices
///   then n lines `ADDC|MULC|ADD|MUL a b|const out`
/// XOR/AND are accepted for ADD/MUL and `INV a out` for `ADDC a 1 out`.
/// `#` starts a comment.
Circuit load_circuit(std::string_view text);
Circuit load_circuit_file(const std::string& path);
std::string to_text(const Circuit& circuit);

/// Fixes a subset of inputs to public constants and folds every gate whose
/// value becomes constant. Unfixed inputs keep their relative order and are
/// renumbered from 0. At least one input must stay free.
Circuit bind_inputs(const Circuit& circuit, std::span<const std::optional<Elem>> fixed);

// Bit-vector helpers for Boolean circuits; bit order is MSB-first per byte.
std::vector<Elem> bytes_to_bits(std::span<const std::uint8_t> bytes);
Bytes bits_to_bytes(std::span<const Elem> bits);

}  // namespace pqvrf
