#include "pqvrf/pos_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pqvrf {

Bytes eligibility_message(const Digest& tip, std::uint64_t slot) {
  ByteWriter w;
  w.raw(tip);
  w.u64(slot);
  return std::move(w).take();
}

bool below_target(const Digest& beta, std::uint64_t stake, const U256& target) {
  return U512(u256_from_bytes(beta)) < U512(stake) * U512(target);
}

Eligibility eligible(const StakeHolder& node, std::uint64_t slot, const Digest& tip, const U256& target) {
  Eligibility e;
  if (node.stake == 0) return e;
  e.beta = vrf_output(node.keys.s, eligibility_message(tip, slot));
  e.eligible = below_target(e.beta, node.stake, target);
  return e;
}

U256 target_for(double leaders_per_slot, std::uint64_t total_stake) {
  if (total_stake == 0) throw std::invalid_argument("total stake must be positive");
  if (!(leaders_per_slot > 0)) throw std::invalid_argument("leaders per slot must be positive");
  // leaders_per_slot as a 32.32 fixed-point number.
  const U512 scaled = U512(static_cast<std::uint64_t>(std::llround(leaders_per_slot * 4294967296.0)));
  U512 t = (scaled << 224) / U512(total_stake);
  const U512 cap = (U512(1) << 256) - 1;
  return static_cast<U256>(std::min(t, cap));
}

std::vector<CommitteeSeat> select_committee(const std::vector<StakeHolder>& nodes, std::uint64_t slot,
                                            const Digest& seed, double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("committee probability must lie in [0, 1]");
  std::vector<CommitteeSeat> out;
  if (p == 0) return out;
  const U512 threshold = U512(static_cast<std::uint64_t>(std::llround(p * 9007199254740992.0))) << 203;
  for (const StakeHolder& node : nodes)
    for (std::uint64_t unit = 0; unit < node.stake; ++unit) {
      if (p == 1) {
        out.push_back({node.id, unit});
        continue;
      }
      ByteWriter w;
      w.u8(static_cast<std::uint8_t>(HashTag::kCommitteeMessage));
      w.raw(seed);
      w.u64(slot);
      w.u64(unit);
      if (U512(u256_from_bytes(vrf_output(node.keys.s, w.bytes()))) < threshold) out.push_back({node.id, unit});
    }
  return out;
}

const char* adversary_name(Adversary a) {
  switch (a) {
    case Adversary::kHonest: return "honest";
    case Adversary::kWithhold: return "withhold";
    case Adversary::kGrindLite: return "grind-lite";
  }
  return "?";
}

Adversary parse_adversary(std::string_view name) {
  if (name == "honest") return Adversary::kHonest;
  if (name == "withhold") return Adversary::kWithhold;
  if (name == "grind-lite" || name == "grind") return Adversary::kGrindLite;
  throw std::invalid_argument("unknown adversary strategy '" + std::string(name) + "'");
}

bool violates_honest_majority(const PosConfig& config) { return config.alpha >= 0.5; }

Digest block_hash(const Digest& parent, std::uint64_t slot, std::uint32_t creator, const Digest& beta,
                  const Digest& payload) {
  Sha256 h(HashTag::kBlock);
  h.update(parent).update_u64(slot).update_u32(creator).update(beta).update(payload);
  return h.finish();
}

PosTranscript genesis_transcript() {
  PosTranscript tr;
  Block g;
  g.hash = tagged_hash(HashTag::kBlock, as_bytes("genesis"));
  tr.blocks.push_back(g);
  return tr;
}

std::uint32_t append_block(PosTranscript& tr, std::uint32_t parent, std::uint64_t slot, std::uint32_t creator,
                           bool adversarial, const Digest& beta, const Digest& payload) {
  Block b;
  b.parent = parent;
  b.parent_hash = tr.blocks.at(parent).hash;
  b.height = tr.blocks[parent].height + 1;
  b.slot = slot;
  b.creator = creator;
  b.adversarial = adversarial;
  b.beta = beta;
  b.payload = payload;
  b.hash = block_hash(b.parent_hash, slot, creator, beta, payload);
  tr.blocks.push_back(std::move(b));
  return static_cast<std::uint32_t>(tr.blocks.size() - 1);
}

namespace {

// Longest chain; equal heights go to the smaller tip hash.
bool better(const std::vector<Block>& blocks, std::uint32_t a, std::uint32_t b) {
  if (blocks[a].height != blocks[b].height) return blocks[a].height > blocks[b].height;
  return blocks[a].hash < blocks[b].hash;
}

std::uint32_t lca(const std::vector<Block>& blocks, std::uint32_t a, std::uint32_t b) {
  while (a != b) {
    if (blocks[a].height > blocks[b].height) a = blocks[a].parent;
    else if (blocks[b].height > blocks[a].height) b = blocks[b].parent;
    else {
      a = blocks[a].parent;
      b = blocks[b].parent;
    }
  }
  return a;
}

std::vector<std::uint32_t> distinct(std::vector<std::uint32_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

SimMetrics measure_metrics(const PosTranscript& tr, std::uint64_t window) {
  if (window == 0) throw std::invalid_argument("window must be positive");
  SimMetrics m;
  const auto& blocks = tr.blocks;
  if (tr.views.empty()) return m;
  const std::size_t slots = tr.views.size(), honest = tr.views.back().size();

  m.growth = UINT64_MAX;
  for (std::uint32_t tip : tr.views.back()) m.growth = std::min(m.growth, blocks[tip].height);

  m.min_window_growth = UINT64_MAX;
  auto height_at = [&](std::size_t slot, std::size_t i) { return slot == 0 ? 0 : blocks[tr.views[slot - 1][i]].height; };
  for (std::size_t i = 0; i < honest; ++i) {
    if (slots < window) {
      m.min_window_growth = std::min(m.min_window_growth, height_at(slots, i));
      continue;
    }
    for (std::size_t r = window; r <= slots; ++r)
      m.min_window_growth = std::min(m.min_window_growth, height_at(r, i) - height_at(r - window, i));
  }

  for (std::uint32_t tip : distinct(tr.views.back())) {
    std::vector<bool> adv;
    for (std::uint32_t b = tip; b != 0; b = blocks[b].parent) adv.push_back(blocks[b].adversarial);
    if (adv.empty()) continue;
    const std::size_t w = std::min<std::size_t>(window, adv.size());
    std::size_t count = std::count(adv.begin(), adv.begin() + w, true);
    std::size_t worst = count;
    for (std::size_t k = w; k < adv.size(); ++k) {
      count += adv[k];
      count -= adv[k - w];
      worst = std::max(worst, count);
    }
    m.max_adversarial_fraction = std::max(m.max_adversarial_fraction, double(worst) / double(w));
  }
  m.quality = 1 - m.max_adversarial_fraction;

  // Pairs (view at r, view at r + lag) for a spread of lags.
  static constexpr std::size_t kLags[] = {0, 1, 2, 5, 10, 50};
  std::vector<std::vector<std::uint32_t>> tips(slots);
  for (std::size_t r = 0; r < slots; ++r) tips[r] = distinct(tr.views[r]);
  for (std::size_t r = 0; r < slots; ++r)
    for (std::size_t lag : kLags) {
      if (r + lag >= slots) break;
      for (std::uint32_t a : tips[r])
        for (std::uint32_t b : tips[r + lag])
          m.common_prefix_k = std::max(m.common_prefix_k, blocks[a].height - blocks[lca(blocks, a, b)].height);
    }
  return m;
}

std::vector<StakeHolder> make_stakeholders(const PosConfig& config) {
  if (config.nodes == 0) throw std::invalid_argument("need at least one node");
  if (config.alpha < 0 || config.alpha > 1) throw std::invalid_argument("alpha must lie in [0, 1]");
  const auto adversarial = static_cast<std::uint32_t>(std::llround(config.alpha * config.nodes));
  const Drbg root(config.seed);
  std::vector<StakeHolder> nodes;
  for (std::uint32_t i = 0; i < config.nodes; ++i) {
    Drbg rng = root.fork(0x1000 + i);
    auto seed = rng.bytes<32>();
    nodes.push_back({i, config.stake_per_node, vrf_gen(seed), i < adversarial});
  }
  return nodes;
}

namespace {

class Simulator {
 public:
  explicit Simulator(PosRun& run)
      : run_(run), cfg_(run.config), tr_(run.transcript), blocks_(run.transcript.blocks),
        rng_(Drbg(cfg_.seed).fork(1)) {}

  void run();

 private:
  struct View {
    std::uint32_t tip = 0;
    std::vector<char> known{1};
  };
  struct Delivery {
    std::uint32_t block;
    std::uint32_t node;
    bool operator<(const Delivery& o) const { return std::tie(block, node) < std::tie(o.block, o.node); }
  };

  bool withholding() const { return cfg_.adversary == Adversary::kWithhold; }
  bool own_view(const StakeHolder& n) const { return !(n.adversarial && withholding()); }

  void deliver(std::uint64_t slot);
  void receive(std::uint32_t node, std::uint32_t block);
  std::uint32_t make_block(const StakeHolder& node, std::uint32_t parent, std::uint64_t slot, const Digest& beta);
  void broadcast(std::uint32_t block, std::uint32_t from, std::uint64_t slot, bool instant);
  void publish(std::uint32_t block);

  PosRun& run_;
  const PosConfig& cfg_;
  PosTranscript& tr_;
  std::vector<Block>& blocks_;
  Drbg rng_;
  std::vector<View> views_;
  std::vector<std::vector<Delivery>> inbox_;
  // Withholding coalition state.
  std::uint32_t public_best_ = 0;
  std::uint32_t private_tip_ = 0;
  std::vector<std::uint32_t> unpublished_;
  std::uint64_t created_ = 0;
};

void Simulator::receive(std::uint32_t node, std::uint32_t block) {
  View& v = views_[node];
  if (v.known.size() < blocks_.size()) v.known.resize(blocks_.size(), 0);
  v.known[block] = 1;
  if (better(blocks_, block, v.tip)) v.tip = block;
}

void Simulator::deliver(std::uint64_t slot) {
  std::vector<Delivery> due = std::move(inbox_[slot]);
  std::sort(due.begin(), due.end());
  // Blocks whose parent is still unknown wait; retry while anything lands.
  for (bool progress = true; progress && !due.empty();) {
    progress = false;
    std::vector<Delivery> wait;
    for (const Delivery& d : due) {
      View& v = views_[d.node];
      if (v.known.size() < blocks_.size()) v.known.resize(blocks_.size(), 0);
      if (v.known[d.block]) continue;
      if (!v.known[blocks_[d.block].parent]) {
        wait.push_back(d);
        continue;
      }
      receive(d.node, d.block);
      progress = true;
    }
    due = std::move(wait);
  }
  if (!due.empty()) {
    if (slot + 1 >= inbox_.size()) inbox_.resize(slot + 2);
    inbox_[slot + 1].insert(inbox_[slot + 1].end(), due.begin(), due.end());
  }
}

std::uint32_t Simulator::make_block(const StakeHolder& node, std::uint32_t parent, std::uint64_t slot,
                                    const Digest& beta) {
  // Eligibility is already fixed by beta; only the payload is free.
  auto payload_for = [&](std::uint32_t nonce) {
    Sha256 h(HashTag::kBlock);
    h.update(as_bytes("payload")).update_u64(cfg_.seed).update_u64(slot).update_u32(node.id).update_u32(nonce);
    return h.finish();
  };
  Digest payload = payload_for(0);
  if (node.adversarial && cfg_.adversary == Adversary::kGrindLite) {
    Digest best = block_hash(blocks_[parent].hash, slot, node.id, beta, payload);
    for (std::uint32_t nonce = 1; nonce < cfg_.grind_attempts; ++nonce) {
      Digest p = payload_for(nonce);
      Digest h = block_hash(blocks_[parent].hash, slot, node.id, beta, p);
      if (h < best) {
        best = h;
        payload = p;
      }
    }
  }
  const std::uint32_t idx = append_block(tr_, parent, slot, node.id, node.adversarial, beta, payload);

  ++created_;
  if (cfg_.proof_every && created_ % cfg_.proof_every == 0) {
    const Bytes msg = eligibility_message(blocks_[parent].hash, slot);
    ByteWriter seed;
    seed.u64(cfg_.seed);
    seed.u64(created_);
    VrfOptions opt;
    opt.rounds = cfg_.proof_rounds;
    VrfEvaluation ev = vrf_eval(node.keys, msg, seed.bytes(), opt);
    ++run_.proofs_checked;
    if (ev.beta != beta || !vrf_verify(node.keys.public_key(), msg, ev)) ++run_.proofs_failed;
    blocks_[idx].proof = std::move(ev);
  }
  return idx;
}

void Simulator::broadcast(std::uint32_t block, std::uint32_t from, std::uint64_t slot, bool instant) {
  for (std::uint32_t i = 0; i < views_.size(); ++i) {
    if (i == from || !own_view(run_.nodes[i])) continue;
    const std::uint64_t d = instant ? 0 : rng_.uniform(cfg_.delta + 1);
    const std::uint64_t at = slot + d;
    if (at >= inbox_.size()) inbox_.resize(at + 1);
    inbox_[at].push_back({block, i});
  }
}

void Simulator::publish(std::uint32_t block) {
  if (better(blocks_, block, public_best_)) public_best_ = block;
}

void Simulator::run() {
  const auto& nodes = run_.nodes;
  views_.assign(nodes.size(), View{});
  inbox_.assign(cfg_.slots + cfg_.delta + 2, {});
  for (const auto& n : nodes)
    if (!n.adversarial) tr_.honest_nodes.push_back(n.id);

  for (std::uint64_t slot = 1; slot <= cfg_.slots; ++slot) {
    SlotRecord rec;
    rec.slot = slot;

    if (withholding() && better(blocks_, public_best_, private_tip_)) {
      private_tip_ = public_best_;
      unpublished_.clear();  // abandoned for good
    }

    bool adversary_extended = false;
    const std::uint32_t private_parent = private_tip_;
    for (const StakeHolder& node : nodes) {
      const std::uint32_t parent = own_view(node) ? views_[node.id].tip : private_parent;
      const Eligibility e = eligible(node, slot, blocks_[parent].hash, run_.target);
      if (!e.eligible) continue;
      (node.adversarial ? rec.eligible_adversarial : rec.eligible_honest)++;
      if (!own_view(node)) {
        // One private block per slot is all the coalition can use.
        if (adversary_extended) continue;
        adversary_extended = true;
        private_tip_ = make_block(node, parent, slot, e.beta);
        unpublished_.push_back(private_tip_);
        ++rec.blocks;
        continue;
      }
      const std::uint32_t b = make_block(node, parent, slot, e.beta);
      ++rec.blocks;
      receive(node.id, b);
      broadcast(b, node.id, slot, false);
      publish(b);
    }

    if (withholding() && !unpublished_.empty() &&
        blocks_[private_tip_].height <= blocks_[public_best_].height + 1) {
      for (std::uint32_t b : unpublished_) {
        broadcast(b, UINT32_MAX, slot, true);
        publish(b);
      }
      rec.released = static_cast<std::uint32_t>(unpublished_.size());
      unpublished_.clear();
    }
    // Delay d lands at the end of slot + d, before the snapshot.
    deliver(slot);

    std::vector<std::uint32_t> view;
    for (std::uint32_t id : tr_.honest_nodes) view.push_back(views_[id].tip);
    rec.min_height = UINT64_MAX;
    for (std::uint32_t tip : view) {
      rec.min_height = std::min(rec.min_height, blocks_[tip].height);
      rec.max_height = std::max(rec.max_height, blocks_[tip].height);
    }
    if (view.empty()) rec.min_height = 0;
    rec.distinct_tips = static_cast<std::uint32_t>(distinct(view).size());
    tr_.views.push_back(std::move(view));
    run_.eligible_honest += rec.eligible_honest;
    run_.eligible_adversarial += rec.eligible_adversarial;
    tr_.slots.push_back(rec);
  }
}

}  // namespace

PosRun run_pos(const PosConfig& config) {
  if (config.slots == 0) throw std::invalid_argument("need at least one slot");
  PosRun run;
  run.config = config;
  run.nodes = make_stakeholders(config);
  std::uint64_t total = 0;
  for (const auto& n : run.nodes) total += n.stake;
  run.target = target_for(config.leaders_per_slot, total);
  run.transcript = genesis_transcript();
  Simulator(run).run();
  run.metrics = measure_metrics(run.transcript, config.window);
  return run;
}

std::vector<std::uint32_t> recheck_blocks(const PosRun& run) {
  std::vector<std::uint32_t> bad;
  const auto& blocks = run.transcript.blocks;
  for (std::uint32_t i = 1; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    bool ok = b.creator < run.nodes.size() && blocks[b.parent].hash == b.parent_hash &&
              block_hash(b.parent_hash, b.slot, b.creator, b.beta, b.payload) == b.hash;
    if (ok) {
      const StakeHolder& node = run.nodes[b.creator];
      const Bytes msg = eligibility_message(b.parent_hash, b.slot);
      ok = node.adversarial == b.adversarial && below_target(b.beta, node.stake, run.target) &&
           vrf_output(node.keys.s, msg) == b.beta;
      if (ok && b.proof) ok = b.proof->beta == b.beta && vrf_verify(node.keys.public_key(), msg, *b.proof).accepted();
    }
    if (!ok) bad.push_back(i);
  }
  return bad;
}

std::string PosRun::slots_csv() const {
  std::ostringstream out;
  out << "slot,eligible_honest,eligible_adversarial,blocks,released,min_height,max_height,distinct_tips\n";
  for (const SlotRecord& r : transcript.slots)
    out << r.slot << ',' << r.eligible_honest << ',' << r.eligible_adversarial << ',' << r.blocks << ','
        << r.released << ',' << r.min_height << ',' << r.max_height << ',' << r.distinct_tips << '\n';
  return out.str();
}

std::string PosRun::summary_json() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["config"] = {{"nodes", config.nodes},
                 {"alpha", config.alpha},
                 {"stake_per_node", config.stake_per_node},
                 {"slots", config.slots},
                 {"delta", config.delta},
                 {"leaders_per_slot", config.leaders_per_slot},
                 {"adversary", adversary_name(config.adversary)},
                 {"seed", config.seed},
                 {"proof_every", config.proof_every},
                 {"window", config.window}};
  j["target_hex"] = u256_hex(target);
  j["honest_majority_violated"] = violates_honest_majority(config);
  j["blocks"] = transcript.blocks.size() - 1;
  j["eligible_honest"] = eligible_honest;
  j["eligible_adversarial"] = eligible_adversarial;
  j["proofs_checked"] = proofs_checked;
  j["proofs_failed"] = proofs_failed;
  j["metrics"] = {{"growth", metrics.growth},
                  {"min_window_growth", metrics.min_window_growth},
                  {"max_adversarial_fraction", metrics.max_adversarial_fraction},
                  {"quality", metrics.quality},
                  {"common_prefix_k", metrics.common_prefix_k}};
  return j.dump(2) + "\n";
}

}  // namespace pqvrf
