#include "pqvrf/beacon.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

namespace pqvrf {

const char* behavior_name(Behavior b) {
  switch (b) {
    case Behavior::kHonest: return "honest";
    case Behavior::kSilent: return "silent";
    case Behavior::kCorruptValue: return "corrupt-value";
    case Behavior::kEquivocate: return "equivocate";
  }
  return "?";
}

Behavior parse_behavior(std::string_view name) {
  if (name == "honest") return Behavior::kHonest;
  if (name == "silent") return Behavior::kSilent;
  if (name == "corrupt-value" || name == "corrupt") return Behavior::kCorruptValue;
  if (name == "equivocate") return Behavior::kEquivocate;
  throw std::invalid_argument("unknown byzantine behavior '" + std::string(name) + "'");
}

void validate(const BeaconConfig& c) {
  if (c.n == 0) throw ConfigError("n >= 1 violated");
  if (c.t >= c.n) throw ConfigError("t < n violated (t=" + std::to_string(c.t) + ", n=" + std::to_string(c.n) + ")");
  std::set<std::uint32_t> ids;
  for (std::uint32_t id : c.byzantine) {
    if (id == 0 || id > c.n) throw ConfigError("byzantine id " + std::to_string(id) + " outside 1..n");
    if (!ids.insert(id).second) throw ConfigError("byzantine id " + std::to_string(id) + " listed twice");
  }
  const std::uint32_t f = static_cast<std::uint32_t>(c.byzantine.size());
  if (c.bft_sizing) {
    if (c.n < 3 * f + 1)
      throw ConfigError("n >= 3f+1 violated (n=" + std::to_string(c.n) + ", f=" + std::to_string(f) + ")");
    if (c.t < f) throw ConfigError("t >= f violated (t=" + std::to_string(c.t) + ", f=" + std::to_string(f) + ")");
  }
}

Digest round_message(const Digest& prev, std::uint32_t round) {
  Sha256 h(HashTag::kBeaconRound);
  h.update(prev).update_u32(round);
  return h.finish();
}

std::uint32_t BeaconRun::finalized() const {
  return static_cast<std::uint32_t>(
      std::count_if(rounds.begin(), rounds.end(), [](const auto& r) { return r.status == RoundStatus::kFinalized; }));
}

std::string BeaconRun::transcript() const {
  std::string out;
  for (const auto& e : events) out += e + "\n";
  return out;
}

std::string BeaconRun::summary_json() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["n"] = config.n;
  j["t"] = config.t;
  j["rounds"] = config.rounds;
  j["byzantine"] = config.byzantine;
  j["behavior"] = behavior_name(config.behavior);
  j["seed"] = config.seed;
  j["sd0"] = to_hex(config.sd0);
  j["vpk"] = u256_hex(dkg.pk.vpk);
  j["finalized"] = finalized();
  j["failed"] = config.rounds - finalized();
  auto& out = j["outputs"] = nlohmann::ordered_json::array();
  for (const BeaconRound& r : rounds) {
    nlohmann::ordered_json e;
    e["round"] = r.round;
    e["status"] = r.status == RoundStatus::kFinalized ? "finalized" : "failed";
    e["value"] = r.status == RoundStatus::kFinalized ? u256_hex(r.value) : "";
    e["contributors"] = r.contributors;
    out.push_back(e);
  }
  return j.dump(2) + "\n";
}

namespace {

Digest chain_input(const std::optional<U256>& last_final, const Digest& sd0) {
  return last_final ? u256_to_bytes(*last_final) : sd0;
}

Bytes dkg_seed(std::uint64_t seed) {
  ByteWriter w;
  w.raw(as_bytes("beacon-dkg"));
  w.u64(seed);
  return std::move(w).take();
}

}  // namespace

BeaconRun run_beacon(const BeaconConfig& config) {
  validate(config);
  BeaconRun run;
  run.config = config;
  run.dkg = dist_keygen(config.n, config.t, dkg_seed(config.seed), config.q);
  const DvrfPublicKey& pk = run.dkg.pk;
  const Zq zq = pk.field();

  auto behavior_of = [&](std::uint32_t id) {
    return std::count(config.byzantine.begin(), config.byzantine.end(), id) ? config.behavior : Behavior::kHonest;
  };
  auto emit = [&](nlohmann::ordered_json j) { run.events.push_back(j.dump()); };

  {
    nlohmann::ordered_json j;
    j["event"] = "setup";
    j["n"] = config.n;
    j["t"] = config.t;
    j["byzantine"] = config.byzantine;
    j["behavior"] = behavior_name(config.behavior);
    j["vpk"] = u256_hex(pk.vpk);
    j["qual"] = pk.qual;
    emit(j);
  }

  std::optional<U256> last_final;
  for (std::uint32_t r = 1; r <= config.rounds; ++r) {
    BeaconRound round;
    round.round = r;
    round.message = round_message(chain_input(last_final, config.sd0), r);
    const std::span<const std::uint8_t> m(round.message);
    emit({{"round", r}, {"event", "message"}, {"m", to_hex(round.message)}});

    // Honest partials are computed once; byzantine ones per recipient.
    std::vector<std::optional<PartialEval>> honest(config.n + 1);
    for (std::uint32_t j = 1; j <= config.n; ++j)
      if (behavior_of(j) != Behavior::kSilent) honest[j] = partial_eval(pk, run.dkg.servers[j - 1], m);

    std::optional<U256> agreed;
    bool all_ok = true;
    std::vector<PartialEval> proof;
    for (std::uint32_t i = 1; i <= config.n; ++i) {
      if (behavior_of(i) != Behavior::kHonest) continue;
      std::vector<PartialEval> inbox;
      for (std::uint32_t j = 1; j <= config.n; ++j) {
        if (!honest[j]) continue;
        PartialEval p = *honest[j];
        const Behavior b = behavior_of(j);
        if (b == Behavior::kCorruptValue || (b == Behavior::kEquivocate && i % 2 == 1)) p.value = zq.add(p.value, 1);
        const bool ok = verify_partial(pk, m, p);
        if (!ok) ++round.rejected_partials;
        emit({{"round", r}, {"event", "partial"}, {"from", j}, {"to", i}, {"value", u256_hex(p.value)}, {"valid", ok}});
        inbox.push_back(std::move(p));
      }
      CombineResult c = combine(pk, m, inbox);
      if (!c.ok()) {
        all_ok = false;
        continue;
      }
      if (agreed && *agreed != c.value) round.disagreement = true;
      if (!agreed) {
        agreed = c.value;
        proof = c.proof;
      }
    }

    if (all_ok && agreed && !round.disagreement && dvrf_verify(pk, m, *agreed, proof) == DvrfReject::kNone) {
      round.status = RoundStatus::kFinalized;
      round.value = *agreed;
      round.proof = std::move(proof);
      for (const auto& p : round.proof) round.contributors.push_back(p.id);
      emit({{"round", r}, {"event", "finalized"}, {"value", u256_hex(round.value)}, {"set", round.contributors}});
    } else {
      round.status = RoundStatus::kFailed;
      emit({{"round", r},
            {"event", "failed"},
            {"reason", round.disagreement ? "disagreement" : "insufficient"}});
    }
    if (round.status == RoundStatus::kFinalized) last_final = round.value;
    run.rounds.push_back(std::move(round));
  }
  return run;
}

std::optional<std::uint32_t> check_chain(const BeaconRun& run) {
  std::optional<U256> last_final;
  for (const BeaconRound& r : run.rounds) {
    if (r.message != round_message(chain_input(last_final, run.config.sd0), r.round)) return r.round;
    if (r.status == RoundStatus::kFinalized) last_final = r.value;
  }
  return std::nullopt;
}

UnpredictabilityReport check_unpredictability(const BeaconRun& run, std::span<const std::uint32_t> coalition) {
  const DvrfPublicKey& pk = run.dkg.pk;
  const Zq zq = pk.field();
  UnpredictabilityReport rep;
  std::map<std::uint32_t, U256> exposed;  // shares recovered from public partials so far
  for (const BeaconRound& r : run.rounds) {
    ++rep.rounds;
    if (r.status != RoundStatus::kFinalized) continue;
    const U256 g = hash_to_zq(zq, tagged_hash(HashTag::kH1, r.message));

    if (!coalition.empty()) {
      // Interpolate the lowest-degree polynomial through the coalition's
      // shares; with fewer than t + 1 points this is a guess.
      std::vector<std::uint32_t> ids(coalition.begin(), coalition.end());
      auto lambda = lagrange_at_zero(zq, ids);
      U256 guess = 0;
      for (std::size_t k = 0; k < ids.size(); ++k)
        guess = zq.add(guess, zq.mul(zq.mul(run.dkg.servers[ids[k] - 1].share, g), lambda[k]));
      if (guess == r.value) ++rep.predictable;
    }

    if (exposed.size() >= pk.t + 1) {
      std::vector<std::uint32_t> ids;
      for (const auto& [id, share] : exposed) ids.push_back(id);
      ids.resize(pk.t + 1);
      auto lambda = lagrange_at_zero(zq, ids);
      U256 v = 0;
      for (std::size_t k = 0; k < ids.size(); ++k) v = zq.add(v, zq.mul(zq.mul(exposed[ids[k]], g), lambda[k]));
      if (v == r.value) ++rep.leaked_by_public_partials;
    }
    for (const auto& p : r.proof) exposed[p.id] = zq.mul(p.value, zq.inv(g));
  }
  return rep;
}

UnbiasabilityReport check_unbiasability(std::span<const BeaconRun> runs) {
  std::vector<std::uint64_t> counts(256, 0);
  UnbiasabilityReport rep;
  for (const BeaconRun& run : runs)
    for (const BeaconRound& r : run.rounds)
      if (r.status == RoundStatus::kFinalized) {
        ++counts[static_cast<unsigned>(r.value & 0xff)];
        ++rep.samples;
      }
  rep.low_byte = chi_square_uniform(counts);
  return rep;
}

}  // namespace pqvrf
