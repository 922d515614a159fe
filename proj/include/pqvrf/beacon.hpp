#pragma once

// Round-based random beacon over the threshold DVRF, simulated in-process.
//
// Round r signs m_r = H(prev || r), where prev is the last finalized output
// (or the genesis seed sd0 before the first). Every server sends its partial
// to every server; each honest server combines what it received, in sender
// order. A round finalizes when all honest servers obtain the same value.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqvrf/dvrf.hpp"
#include "pqvrf/stats.hpp"

namespace pqvrf {

enum class Behavior { kHonest, kSilent, kCorruptValue, kEquivocate };
const char* behavior_name(Behavior b);
Behavior parse_behavior(std::string_view name);

struct BeaconConfig {
  std::uint32_t n = 4;
  std::uint32_t t = 1;
  std::uint32_t rounds = 10;
  std::vector<std::uint32_t> byzantine;
  Behavior behavior = Behavior::kSilent;
  /// Also require n >= 3f + 1 and t >= f with f = |byzantine|.
  bool bft_sizing = false;
  std::uint64_t seed = 0;
  Digest sd0{};
  U256 q = default_dvrf_prime();
};

/// Invalid (n, t, f) combination; the message names the violated inequality.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void validate(const BeaconConfig& config);

enum class RoundStatus { kFinalized, kFailed };

struct BeaconRound {
  std::uint32_t round = 0;
  Digest message{};
  RoundStatus status = RoundStatus::kFailed;
  U256 value;
  std::vector<PartialEval> proof;
  std::vector<std::uint32_t> contributors;
  /// Partials that reached some honest server but did not verify.
  std::uint32_t rejected_partials = 0;
  /// Honest servers whose combined value differed from the others'.
  bool disagreement = false;
};

struct BeaconRun {
  BeaconConfig config;
  DkgResult dkg;
  std::vector<BeaconRound> rounds;
  /// JSON lines, one event each.
  std::vector<std::string> events;

  std::uint32_t finalized() const;
  std::string transcript() const;
  std::string summary_json() const;
};

Digest round_message(const Digest& prev, std::uint32_t round);

BeaconRun run_beacon(const BeaconConfig& config);

/// First round whose message does not follow from its predecessors, or
/// nullopt when the whole chain recomputes.
std::optional<std::uint32_t> check_chain(const BeaconRun& run);

struct UnpredictabilityReport {
  std::uint32_t rounds = 0;
  /// Finalized rounds whose value the coalition reproduces from its own
  /// shares by interpolation.
  std::uint32_t predictable = 0;
  /// Finalized rounds whose value an outside observer derives from earlier
  /// public partials: v_i / H2q(h) exposes share i under the key-linear
  /// evaluation, so once t + 1 shares have appeared every later round is
  /// known in advance.
  std::uint32_t leaked_by_public_partials = 0;
};

UnpredictabilityReport check_unpredictability(const BeaconRun& run, std::span<const std::uint32_t> coalition);

struct UnbiasabilityReport {
  std::uint64_t samples = 0;
  ChiSquare low_byte;
};

/// Chi-square of the low byte of every finalized value across the runs.
UnbiasabilityReport check_unbiasability(std::span<const BeaconRun> runs);

}  // namespace pqvrf
