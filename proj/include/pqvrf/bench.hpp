#pragma once

// Size and timing table for the VRF: per (mode, t) the cost of keygen, the
// plain output, a proved evaluation and its verification.

#include <cstdint>
#include <string>
#include <vector>

#include "pqvrf/zkboo.hpp"

namespace pqvrf {

struct BenchRecord {
  std::string mode;
  std::uint32_t rounds = 0;
  std::string op;  // keygen, eval, proof, verify
  std::uint64_t bytes = 0;
  double ms = 0;  // mean wall time per repetition
  std::uint32_t reps = 0;
};

struct BenchConfig {
  std::vector<std::uint32_t> rounds{20, 40, 60, 80, 100};
  std::vector<ProofMode> modes{ProofMode::kZkboo, ProofMode::kZkbpp};
  std::uint32_t reps = 3;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

/// Every record's byte count is deterministic given the seed; times are not.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

std::string bench_csv(const std::vector<BenchRecord>& records);

/// Least-squares fit bytes = a + b * t; returns R^2.
double linear_r2(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pqvrf
