#include <cmath>
#include <set>

#include "doctest.h"
#include "pqvrf/pos_sim.hpp"
#include "pqvrf/stats.hpp"

using namespace pqvrf;

namespace {

StakeHolder holder(std::uint64_t stake, std::uint64_t seed) {
  Drbg rng(seed);
  auto s = rng.bytes<32>();
  return {0, stake, vrf_gen(s), false};
}

Digest tip_of(std::uint64_t i) {
  ByteWriter w;
  w.u64(i);
  return sha256(w.bytes());
}

PosConfig small_config() {
  PosConfig c;
  c.nodes = 12;
  c.slots = 300;
  c.window = 50;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("eligibility edge cases") {
  const U256 max256 = std::numeric_limits<U256>::max();
  StakeHolder zero = holder(0, 1), rich = holder(2, 2);
  for (std::uint64_t slot = 0; slot < 200; ++slot) {
    CHECK_FALSE(eligible(zero, slot, tip_of(slot), max256).eligible);
    CHECK(eligible(rich, slot, tip_of(slot), max256 / 2 + 1).eligible);  // stk * T = 2^256
  }
  Digest top;
  top.fill(0xff);
  CHECK(below_target(top, 1, max256) == false);
  CHECK(below_target(top, 2, max256));
}

TEST_CASE("eligibility frequency matches stk * T / 2^256") {
  StakeHolder node = holder(1, 3);
  const U256 target = target_for(0.1, 1);
  const std::uint64_t trials = 10000;
  std::uint64_t hits = 0;
  for (std::uint64_t slot = 0; slot < trials; ++slot) hits += eligible(node, slot, tip_of(7), target).eligible;
  CHECK(std::abs(binomial_z(hits, trials, 0.1)) < 3.0);
}

TEST_CASE("eligibility depends on tip and slot") {
  StakeHolder node = holder(1, 4);
  const U256 target = target_for(0.5, 1);
  CHECK(eligible(node, 1, tip_of(1), target).beta != eligible(node, 2, tip_of(1), target).beta);
  CHECK(eligible(node, 1, tip_of(1), target).beta != eligible(node, 1, tip_of(2), target).beta);
  CHECK(eligible(node, 1, tip_of(1), target).beta == vrf_output(node.keys.s, eligibility_message(tip_of(1), 1)));
}

TEST_CASE("doubling stake and halving the target changes nothing") {
  PosConfig c;
  c.nodes = 20;
  auto nodes = make_stakeholders(c);
  U256 target = target_for(2.0, 20 * 40);
  target &= ~U256(1);  // even, so halving is exact
  for (std::uint64_t slot = 1; slot <= 300; ++slot)
    for (StakeHolder n : nodes) {
      const bool before = eligible(n, slot, tip_of(slot), target).eligible;
      n.stake *= 2;
      CHECK(eligible(n, slot, tip_of(slot), target / 2).eligible == before);
    }
}

TEST_CASE("committee selection") {
  PosConfig c;
  c.nodes = 50;
  c.stake_per_node = 40;
  auto nodes = make_stakeholders(c);
  const Digest seed = tip_of(99);
  CHECK(select_committee(nodes, 1, seed, 0.0).empty());
  CHECK(select_committee(nodes, 1, seed, 1.0).size() == 2000);
  CHECK_THROWS(select_committee(nodes, 1, seed, 1.5));

  const int slots = 200;
  double sum = 0;
  for (int s = 0; s < slots; ++s) sum += double(select_committee(nodes, s, seed, 0.05).size());
  const double mean = sum / slots, sigma = std::sqrt(2000 * 0.05 * 0.95);
  CHECK(std::abs(mean - 100) <= 3 * sigma);
  CHECK(std::abs(mean - 100) <= 3 * sigma / std::sqrt(double(slots)));
}

TEST_CASE("target calibration") {
  CHECK(target_for(1.0, 1) == std::numeric_limits<U256>::max());
  CHECK(target_for(1.0, 2) == U256(1) << 255);
  CHECK(target_for(3.0, 2000) == static_cast<U256>((U512(3) << 256) / 2000));
  CHECK_THROWS(target_for(1.0, 0));
  CHECK_THROWS(target_for(0.0, 10));
}

TEST_CASE("metric fixtures") {
  SUBCASE("single node") {
    PosTranscript tr = genesis_transcript();
    std::uint32_t tip = 0;
    for (std::uint64_t s = 1; s <= 30; ++s) {
      if (s % 3 != 0) tip = append_block(tr, tip, s, 0, false);
      tr.views.push_back({tip});
    }
    tr.honest_nodes = {0};
    SimMetrics m = measure_metrics(tr, 10);
    CHECK(m.growth == 20);
    CHECK(m.quality == 1.0);
    CHECK(m.common_prefix_k == 0);
    CHECK(m.min_window_growth == 6);
  }
  SUBCASE("two chains diverging at depth 3") {
    PosTranscript tr = genesis_transcript();
    std::uint32_t base = 0;
    for (std::uint64_t s = 1; s <= 5; ++s) base = append_block(tr, base, s, 0, false);
    std::uint32_t a = base, b = base;
    for (std::uint64_t s = 6; s <= 8; ++s) {
      a = append_block(tr, a, s, 0, false);
      b = append_block(tr, b, s, 1, true);
    }
    tr.honest_nodes = {0, 1};
    tr.views.push_back({a, b});
    SimMetrics m = measure_metrics(tr, 200);
    CHECK(m.common_prefix_k == 3);
    CHECK(m.growth == 8);
    CHECK(m.max_adversarial_fraction == doctest::Approx(3.0 / 8));
  }
}

TEST_CASE("all honest without delay never diverges") {
  PosConfig c;
  c.nodes = 20;
  c.alpha = 0;
  c.delta = 0;
  c.slots = 1000;
  c.adversary = Adversary::kHonest;
  c.seed = 8;
  PosRun run = run_pos(c);
  CHECK(run.metrics.common_prefix_k == 0);
  for (const auto& view : run.transcript.views) CHECK(std::set<std::uint32_t>(view.begin(), view.end()).size() == 1);
  CHECK(run.metrics.quality == 1.0);
  CHECK(run.metrics.growth > 900);
}

TEST_CASE("runs are deterministic and every block re-checks") {
  for (Adversary a : {Adversary::kHonest, Adversary::kWithhold, Adversary::kGrindLite}) {
    PosConfig c = small_config();
    c.adversary = a;
    PosRun x = run_pos(c), y = run_pos(c);
    CHECK(x.slots_csv() == y.slots_csv());
    CHECK(x.summary_json() == y.summary_json());
    CHECK(recheck_blocks(x).empty());
    c.seed = 6;
    CHECK(run_pos(c).slots_csv() != x.slots_csv());
  }
}

TEST_CASE("full proofs on a subsample agree with the fast path") {
  PosConfig c = small_config();
  c.slots = 40;
  c.proof_every = 25;
  c.proof_rounds = 4;
  PosRun run = run_pos(c);
  CHECK(run.proofs_checked >= 2);
  CHECK(run.proofs_failed == 0);
  CHECK(recheck_blocks(run).empty());

  // A forged beta in a block is caught by the re-check.
  std::uint32_t idx = 1;
  while (!run.transcript.blocks[idx].proof) ++idx;
  run.transcript.blocks[idx].beta[0] ^= 1;
  auto bad = recheck_blocks(run);
  CHECK(std::count(bad.begin(), bad.end(), idx) == 1);
}

TEST_CASE("ineligible creators are rejected by the re-check") {
  PosRun run = run_pos(small_config());
  REQUIRE(run.transcript.blocks.size() > 2);
  Block& b = run.transcript.blocks[1];
  b.creator = (b.creator + 1) % run.config.nodes;
  CHECK_FALSE(recheck_blocks(run).empty());
}

TEST_CASE("grinding payloads does not change eligibility frequency") {
  PosConfig c;
  c.nodes = 50;
  c.alpha = 0.2;
  c.slots = 1500;
  c.seed = 12;
  c.adversary = Adversary::kGrindLite;
  PosRun g = run_pos(c);
  c.adversary = Adversary::kHonest;
  PosRun h = run_pos(c);
  for (const PosRun* r : {&g, &h}) {
    const std::uint64_t total = r->eligible_adversarial + r->eligible_honest;
    CHECK(std::abs(binomial_z(r->eligible_adversarial, total, 0.2)) < 3.5);
  }
  CHECK(recheck_blocks(g).empty());
}

TEST_CASE("honest majority lint and parsing") {
  PosConfig c;
  c.alpha = 0.6;
  CHECK(violates_honest_majority(c));
  c.alpha = 0.2;
  CHECK_FALSE(violates_honest_majority(c));
  CHECK(parse_adversary("grind-lite") == Adversary::kGrindLite);
  CHECK_THROWS(parse_adversary("selfish"));
}

TEST_CASE("per-slot csv and summary") {
  PosRun run = run_pos(small_config());
  const std::string csv = run.slots_csv();
  CHECK(csv.rfind("slot,eligible_honest,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 301);
  CHECK(run.summary_json().find("\"common_prefix_k\"") != std::string::npos);
}
