#pragma once

// Proof-of-stake leader election by VRF lottery, with a slot-driven
// longest-chain simulation and chain property measurement.
//
// A node with stake stk is leader of slot r on tip B iff
//   beta = VRF_s(hash(B) || r)  <  stk * T      (256-bit integers)
// The product is compared at 512 bits, so stk * T >= 2^256 means always.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pqvrf/vrf.hpp"
#include "pqvrf/zq.hpp"

namespace pqvrf {

struct StakeHolder {
  std::uint32_t id = 0;
  std::uint64_t stake = 0;
  VrfKeyMaterial keys;
  bool adversarial = false;
};

/// VRF input for slot eligibility: tip hash then the slot as u64 LE.
Bytes eligibility_message(const Digest& tip, std::uint64_t slot);

/// beta < stk * T, compared exactly.
bool below_target(const Digest& beta, std::uint64_t stake, const U256& target);

struct Eligibility {
  bool eligible = false;
  Digest beta{};
};

/// Fast path: beta only, no proof.
Eligibility eligible(const StakeHolder& node, std::uint64_t slot, const Digest& tip, const U256& target);

/// floor(leaders_per_slot * 2^256 / total_stake): with this target the
/// expected number of eligible nodes per slot is leaders_per_slot.
U256 target_for(double leaders_per_slot, std::uint64_t total_stake);

struct CommitteeSeat {
  std::uint32_t node = 0;
  std::uint64_t unit = 0;  // index among the node's stake units
};

/// Each stake unit is seated independently iff its unit-indexed VRF output
/// falls below p * 2^256.
std::vector<CommitteeSeat> select_committee(const std::vector<StakeHolder>& nodes, std::uint64_t slot,
                                            const Digest& seed, double p);

enum class Adversary { kHonest, kWithhold, kGrindLite };
const char* adversary_name(Adversary a);
Adversary parse_adversary(std::string_view name);

struct PosConfig {
  std::uint32_t nodes = 50;
  double alpha = 0.2;  // adversarial stake ratio
  std::uint64_t stake_per_node = 40;
  std::uint64_t slots = 2000;
  std::uint32_t delta = 1;
  double leaders_per_slot = 3.0;
  Adversary adversary = Adversary::kWithhold;
  std::uint64_t seed = 0;
  /// Attach a full VRF proof to every k-th block and check it (0 = never).
  std::uint64_t proof_every = 0;
  std::uint32_t proof_rounds = kSecureRounds;
  /// Payload candidates tried per block by the grind-lite adversary.
  std::uint32_t grind_attempts = 16;
  /// Window (in blocks) for chain quality, and in slots for growth.
  std::uint64_t window = 200;
};

/// True when alpha >= 1/2 (the run still proceeds).
bool violates_honest_majority(const PosConfig& config);

struct Block {
  Digest hash{};
  Digest parent_hash{};
  std::uint32_t parent = 0;  // index into the block store; genesis is 0
  std::uint64_t height = 0;
  std::uint64_t slot = 0;
  std::uint32_t creator = 0;
  bool adversarial = false;
  Digest beta{};
  Digest payload{};
  std::optional<VrfEvaluation> proof;
};

Digest block_hash(const Digest& parent, std::uint64_t slot, std::uint32_t creator, const Digest& beta,
                  const Digest& payload);

struct SlotRecord {
  std::uint64_t slot = 0;
  std::uint32_t eligible_honest = 0;
  std::uint32_t eligible_adversarial = 0;
  std::uint32_t blocks = 0;
  std::uint32_t released = 0;  // withheld blocks published this slot
  std::uint64_t min_height = 0;
  std::uint64_t max_height = 0;
  std::uint32_t distinct_tips = 0;
};

/// Block store plus the tip of every honest view after each slot.
struct PosTranscript {
  std::vector<Block> blocks;  // blocks[0] is genesis
  std::vector<std::uint32_t> honest_nodes;
  /// views[r][i] = tip index of honest_nodes[i] at the end of slot r+1.
  std::vector<std::vector<std::uint32_t>> views;
  std::vector<SlotRecord> slots;
};

/// Transcript with only a genesis block.
PosTranscript genesis_transcript();
/// Appends a block on `parent` and returns its index.
std::uint32_t append_block(PosTranscript& tr, std::uint32_t parent, std::uint64_t slot, std::uint32_t creator,
                           bool adversarial, const Digest& beta = {}, const Digest& payload = {});

struct SimMetrics {
  /// Shortest final honest chain, in blocks.
  std::uint64_t growth = 0;
  /// Smallest height gain of any honest view over any `window` slots.
  std::uint64_t min_window_growth = 0;
  /// Largest adversarial share over every `window`-block stretch of the final
  /// honest chains; the whole chain counts as one stretch if shorter.
  double max_adversarial_fraction = 0;
  double quality = 1;  // 1 - max_adversarial_fraction
  /// Smallest k such that every honest view, truncated by k blocks, is a
  /// prefix of every honest view at the same or a later sampled slot.
  std::uint64_t common_prefix_k = 0;
};

SimMetrics measure_metrics(const PosTranscript& tr, std::uint64_t window);

struct PosRun {
  PosConfig config;
  std::vector<StakeHolder> nodes;
  U256 target;
  PosTranscript transcript;
  SimMetrics metrics;
  std::uint64_t eligible_honest = 0;
  std::uint64_t eligible_adversarial = 0;
  std::uint64_t proofs_checked = 0;
  std::uint64_t proofs_failed = 0;

  std::string slots_csv() const;
  std::string summary_json() const;
};

/// Equal stakes; the first round(alpha * nodes) ids are adversarial.
std::vector<StakeHolder> make_stakeholders(const PosConfig& config);

PosRun run_pos(const PosConfig& config);

/// Blocks (other than genesis) whose creator was not eligible for its slot on
/// its parent, or whose beta is not the creator's VRF output. Uses the fast
/// path, and vrf_verify where a proof is attached.
std::vector<std::uint32_t> recheck_blocks(const PosRun& run);

}  // namespace pqvrf
