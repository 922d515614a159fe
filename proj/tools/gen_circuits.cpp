// Writes the bundled circuit files: gen_circuits <output-dir>
#include <fstream>
#include <iostream>

#include "pqvrf/circuit_builder.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_circuits <output-dir>\n";
    return 2;
  }
  const pqvrf::Circuit& c = pqvrf::sha256_compression_circuit();
  std::string path = std::string(argv[1]) + "/sha256_compress.circuit";
  std::ofstream out(path, std::ios::binary);
  out << "# SHA-256 compression function, one 512-bit block.\n"
      << "# inputs 0..511 block bits, 512..767 chaining value bits (MSB first per byte)\n"
      << "# outputs: next chaining value, 256 bits in the same order\n"
      << pqvrf::to_text(c);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return 1;
  }
  std::cout << path << ": " << c.gates().size() << " gates, " << c.mul_count() << " AND\n";
  return 0;
}
