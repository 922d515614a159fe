#include "pqvrf/circuit.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pqvrf/circuit_builder.hpp"
#include "pqvrf/hash.hpp"

namespace pqvrf {

namespace {

bool is_prime(std::uint32_t q) {
  if (q < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::kAddConst: return "ADDC";
    case GateKind::kMulConst: return "MULC";
    case GateKind::kAdd: return "ADD";
    case GateKind::kMul: return "MUL";
  }
  return "?";
}

std::string with_line(const std::string& what, std::size_t line) {
  return line == 0 ? what : "line " + std::to_string(line) + ": " + what;
}

}  // namespace

Field::Field(std::uint32_t modulus) : q_(modulus) {
  if (modulus >= (1u << 31) || !is_prime(modulus))
    throw CircuitError("field modulus must be a prime below 2^31, got " + std::to_string(modulus));
  bits_ = 0;
  for (std::uint32_t v = modulus - 1; v != 0; v >>= 1) ++bits_;
}

CircuitError::CircuitError(const std::string& what, std::size_t line)
    : std::runtime_error(with_line(what, line)), line_(line) {}

Circuit::Circuit(Field field, std::uint32_t input_count, std::vector<WireId> outputs, std::vector<Gate> gates)
    : field_(field), inputs_(input_count), outputs_(std::move(outputs)), gates_(std::move(gates)) {
  if (gates_.size() > (1u << 20)) throw CircuitError("circuit exceeds 2^20 gates");
  const std::uint32_t wires = wire_count();
  std::vector<std::uint8_t> written(wires, 0);
  std::fill(written.begin(), written.begin() + inputs_, 1);
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    const std::string where = "gate " + std::to_string(i) + ": ";
    if (g.out < inputs_ || g.out >= wires)
      throw CircuitError(where + "output wire " + std::to_string(g.out) + " out of range");
    if (written[g.out]) throw CircuitError(where + "wire " + std::to_string(g.out) + " written twice");
    auto check_input = [&](WireId w) {
      if (w >= g.out)
        throw CircuitError(where + "input wire " + std::to_string(w) + " is not below output wire " +
                           std::to_string(g.out));
      if (!written[w]) throw CircuitError(where + "reads wire " + std::to_string(w) + " before it is written");
    };
    check_input(g.a);
    if (g.has_constant()) {
      if (!field_.contains(g.constant))
        throw CircuitError(where + "constant " + std::to_string(g.constant) + " not reduced mod q");
    } else {
      check_input(g.b);
    }
    written[g.out] = 1;
    if (g.kind == GateKind::kMul) ++muls_;
  }
  for (WireId w : outputs_)
    if (w >= wires) throw CircuitError("output references unknown wire " + std::to_string(w));

  Sha256 h(HashTag::kCircuit);
  h.update_u32(field_.modulus()).update_u32(inputs_).update_u32(output_count());
  h.update_u32(static_cast<std::uint32_t>(gates_.size()));
  for (WireId w : outputs_) h.update_u32(w);
  ByteWriter buf;
  for (const Gate& g : gates_) {
    buf.u8(static_cast<std::uint8_t>(g.kind));
    buf.u32(g.a);
    buf.u32(g.has_constant() ? g.constant : g.b);
    buf.u32(g.out);
  }
  h.update(buf.bytes());
  digest_ = h.finish();
}

std::vector<Elem> evaluate_wires(const Circuit& circuit, std::span<const Elem> input) {
  const Field& f = circuit.field();
  if (input.size() != circuit.input_count())
    throw CircuitError("expected " + std::to_string(circuit.input_count()) + " inputs, got " +
                       std::to_string(input.size()));
  std::vector<Elem> wires(circuit.wire_count(), 0);
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (!f.contains(input[i])) throw CircuitError("input element not reduced mod q");
    wires[i] = input[i];
  }
  for (const Gate& g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::kAddConst: wires[g.out] = f.add(wires[g.a], g.constant); break;
      case GateKind::kMulConst: wires[g.out] = f.mul(wires[g.a], g.constant); break;
      case GateKind::kAdd: wires[g.out] = f.add(wires[g.a], wires[g.b]); break;
      case GateKind::kMul: wires[g.out] = f.mul(wires[g.a], wires[g.b]); break;
    }
  }
  return wires;
}

std::vector<Elem> evaluate(const Circuit& circuit, std::span<const Elem> input) {
  auto wires = evaluate_wires(circuit, input);
  std::vector<Elem> out;
  out.reserve(circuit.output_count());
  for (WireId w : circuit.outputs()) out.push_back(wires[w]);
  return out;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint32_t parse_u32(std::string_view tok, std::size_t line) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw CircuitError("expected non-negative integer, got '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace

Circuit load_circuit(std::string_view text) {
  struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
  };
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto toks = tokenize(raw);
    if (!toks.empty()) lines.push_back({number, std::move(toks)});
    pos = end + 1;
  }
  if (lines.empty()) throw CircuitError("empty circuit description", 1);

  const Line& header = lines[0];
  if (header.tokens.size() != 3 && header.tokens.size() != 4)
    throw CircuitError("header must be 'm l n q'", header.number);
  const std::uint32_t m = parse_u32(header.tokens[0], header.number);
  const std::uint32_t l = parse_u32(header.tokens[1], header.number);
  const std::uint32_t n = parse_u32(header.tokens[2], header.number);
  const std::uint32_t q = header.tokens.size() == 4 ? parse_u32(header.tokens[3], header.number) : 2;
  Field field = [&] {
    try {
      return Field(q);
    } catch (const CircuitError& e) {
      throw CircuitError(e.what(), header.number);
    }
  }();
  if (l == 0) throw CircuitError("circuit must have at least one output", header.number);
  if (lines.size() < 2) throw CircuitError("missing output wire line", header.number);
  const Line& out_line = lines[1];
  if (out_line.tokens.size() != l)
    throw CircuitError("expected " + std::to_string(l) + " output indices, got " +
                           std::to_string(out_line.tokens.size()),
                       out_line.number);
  std::vector<WireId> outputs;
  for (auto tok : out_line.tokens) outputs.push_back(parse_u32(tok, out_line.number));

  if (lines.size() - 2 != n)
    throw CircuitError("header declares " + std::to_string(n) + " gates but file has " +
                           std::to_string(lines.size() - 2),
                       lines.back().number);
  std::vector<Gate> gates;
  gates.reserve(n);
  std::vector<std::size_t> gate_lines;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const Line& ln = lines[i];
    const auto& t = ln.tokens;
    std::string_view kw = t[0];
    Gate g;
    auto want = [&](std::size_t count) {
      if (t.size() != count)
        throw CircuitError(std::string(kw) + " expects " + std::to_string(count - 1) + " operands", ln.number);
    };
    if (kw == "ADD" || kw == "XOR" || kw == "MUL" || kw == "AND") {
      want(4);
      g.kind = (kw == "ADD" || kw == "XOR") ? GateKind::kAdd : GateKind::kMul;
      g.a = parse_u32(t[1], ln.number);
      g.b = parse_u32(t[2], ln.number);
      g.out = parse_u32(t[3], ln.number);
    } else if (kw == "ADDC" || kw == "MULC") {
      want(4);
      g.kind = kw == "ADDC" ? GateKind::kAddConst : GateKind::kMulConst;
      g.a = parse_u32(t[1], ln.number);
      g.constant = parse_u32(t[2], ln.number);
      g.out = parse_u32(t[3], ln.number);
    } else if (kw == "INV" || kw == "NOT") {
      want(3);
      if (!field.is_binary()) throw CircuitError("INV is only defined over GF(2)", ln.number);
      g.kind = GateKind::kAddConst;
      g.a = parse_u32(t[1], ln.number);
      g.constant = 1;
      g.out = parse_u32(t[2], ln.number);
    } else {
      throw CircuitError("unknown gate kind '" + std::string(kw) + "'", ln.number);
    }
    gates.push_back(g);
    gate_lines.push_back(ln.number);
  }
  try {
    return Circuit(field, m, std::move(outputs), std::move(gates));
  } catch (const CircuitError& e) {
    // Map "gate k:" back to its source line.
    std::string msg = e.what();
    std::size_t line = 0;
    if (msg.rfind("gate ", 0) == 0) {
      std::size_t idx = std::stoul(msg.substr(5));
      if (idx < gate_lines.size()) line = gate_lines[idx];
    } else {
      line = out_line.number;
    }
    throw CircuitError(msg, line);
  }
}

Circuit load_circuit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CircuitError("cannot open circuit file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_circuit(ss.str());
}

std::string to_text(const Circuit& circuit) {
  std::string out;
  out.reserve(circuit.gates().size() * 20 + 64);
  out += std::to_string(circuit.input_count()) + ' ' + std::to_string(circuit.output_count()) + ' ' +
         std::to_string(circuit.gates().size()) + ' ' + std::to_string(circuit.field().modulus()) + '\n';
  for (std::size_t i = 0; i < circuit.outputs().size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(circuit.outputs()[i]);
  }
  out += '\n';
  for (const Gate& g : circuit.gates()) {
    out += kind_name(g.kind);
    out += ' ';
    out += std::to_string(g.a);
    out += ' ';
    out += std::to_string(g.has_constant() ? g.constant : g.b);
    out += ' ';
    out += std::to_string(g.out);
    out += '\n';
  }
  return out;
}

Circuit bind_inputs(const Circuit& circuit, std::span<const std::optional<Elem>> fixed) {
  if (fixed.size() != circuit.input_count()) throw CircuitError("bind_inputs: one entry per input required");
  std::uint32_t free_count = 0;
  for (const auto& v : fixed) {
    if (!v) ++free_count;
    else if (!circuit.field().contains(*v)) throw CircuitError("bind_inputs: constant not reduced mod q");
  }
  if (free_count == 0) throw CircuitError("bind_inputs: at least one input must remain free");

  CircuitBuilder b(circuit.field(), free_count);
  std::vector<Value> values(circuit.wire_count());
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < circuit.input_count(); ++i)
    values[i] = fixed[i] ? Value::of_const(*fixed[i]) : b.input(next++);
  for (const Gate& g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::kAddConst: values[g.out] = b.add_const(values[g.a], g.constant); break;
      case GateKind::kMulConst: values[g.out] = b.mul_const(values[g.a], g.constant); break;
      case GateKind::kAdd: values[g.out] = b.add(values[g.a], values[g.b]); break;
      case GateKind::kMul: values[g.out] = b.mul(values[g.a], values[g.b]); break;
    }
  }
  std::vector<Value> outs;
  for (WireId w : circuit.outputs()) outs.push_back(values[w]);
  return std::move(b).build(outs);
}

std::vector<Elem> bytes_to_bits(std::span<const std::uint8_t> bytes) {
  std::vector<Elem> bits;
  bits.reserve(bytes.size() * 8);
  for (auto byte : bytes)
    for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1u);
  return bits;
}

Bytes bits_to_bytes(std::span<const Elem> bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & 1u) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return out;
}

}  // namespace pqvrf
