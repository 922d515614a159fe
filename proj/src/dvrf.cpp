#include "pqvrf/dvrf.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace pqvrf {

namespace {

Digest message_hash(std::span<const std::uint8_t> message) { return tagged_hash(HashTag::kH1, message); }

void put(Sha256& h, const U256& v) { h.update(u256_to_bytes(v)); }

U256 eval_commitments(const Zq& zq, std::span<const U256> commitments, std::uint32_t j) {
  U256 acc = 0, power = zq.from_u64(1);
  const U256 x = zq.from_u64(j);
  for (const U256& c : commitments) {
    acc = zq.add(acc, zq.mul(c, power));
    power = zq.mul(power, x);
  }
  return acc;
}

U256 challenge(const DvrfPublicKey& pk, std::uint32_t id, const U256& g, const U256& v, const U256& a1,
               const U256& a2) {
  Sha256 h(HashTag::kDvrfChallenge);
  put(h, pk.q);
  put(h, pk.base);
  h.update_u32(id);
  put(h, pk.vvk[id - 1]);
  put(h, g);
  put(h, v);
  put(h, a1);
  put(h, a2);
  return pk.field().reduce(u256_from_bytes(h.finish()));
}

}  // namespace

U256 dvrf_base(const Zq& zq) {
  return zq.hash_to_nonzero(HashTag::kDvrfCommitBase, u256_to_bytes(zq.modulus()));
}

bool verify_share(const Zq& zq, const U256& base, std::span<const U256> commitments, std::uint32_t j,
                  const U256& share) {
  if (j == 0) throw std::invalid_argument("point 0 holds the secret and is never dealt");
  if (!zq.contains(share)) return false;
  return eval_commitments(zq, commitments, j) == zq.mul(share, base);
}

U256 hash_to_zq(const Zq& zq, const Digest& h) { return zq.hash_to_nonzero(HashTag::kDvrfHashToField, h); }

DkgResult dist_keygen(std::uint32_t n, std::uint32_t t, std::span<const std::uint8_t> rng_seed, const U256& q,
                      const DkgFaults& faults) {
  if (n == 0) throw std::invalid_argument("need at least one server");
  if (t >= n) throw std::invalid_argument("threshold must satisfy t < n (got t=" + std::to_string(t) +
                                          ", n=" + std::to_string(n) + ")");
  const Zq zq(q);
  if (q <= n) throw std::invalid_argument("modulus must exceed the number of servers");
  DkgResult out;
  DvrfPublicKey& pk = out.pk;
  pk.q = q;
  pk.base = dvrf_base(zq);
  pk.n = n;
  pk.t = t;

  const Drbg root(rng_seed);
  for (std::uint32_t i = 1; i <= n; ++i) {
    Drbg rng = root.fork(i);
    std::vector<U256> coeffs(t + 1);
    for (auto& a : coeffs) a = zq.random(rng);
    DealerBundle bundle;
    bundle.dealer = i;
    for (const U256& a : coeffs) bundle.commitments.push_back(zq.mul(a, pk.base));
    for (std::uint32_t j = 1; j <= n; ++j) bundle.shares.push_back(eval_poly(zq, coeffs, zq.from_u64(j)));
    if (std::count(faults.corrupt_commitment.begin(), faults.corrupt_commitment.end(), i)) {
      U256& c = bundle.commitments[t == 0 ? 0 : 1];
      c = zq.add(c, 1);
    }
    for (auto [dealer, recipient] : faults.corrupt_share)
      if (dealer == i && recipient >= 1 && recipient <= n)
        bundle.shares[recipient - 1] = zq.add(bundle.shares[recipient - 1], 1);
    out.transcript.push_back(std::move(bundle));
  }

  // Every recipient checks its share; one failed check disqualifies the dealer.
  for (const DealerBundle& b : out.transcript) {
    bool ok = true;
    for (std::uint32_t j = 1; j <= n && ok; ++j) ok = verify_share(zq, pk.base, b.commitments, j, b.shares[j - 1]);
    if (ok) pk.qual.push_back(b.dealer);
  }
  if (pk.qual.empty()) throw std::runtime_error("no dealer passed share verification");

  pk.vpk = 0;
  pk.vvk.assign(n, 0);
  for (std::uint32_t j = 1; j <= n; ++j) out.servers.push_back({j, 0});
  for (std::uint32_t i : pk.qual) {
    const DealerBundle& b = out.transcript[i - 1];
    pk.vpk = zq.add(pk.vpk, b.commitments[0]);
    for (std::uint32_t j = 1; j <= n; ++j) {
      out.servers[j - 1].share = zq.add(out.servers[j - 1].share, b.shares[j - 1]);
      pk.vvk[j - 1] = zq.add(pk.vvk[j - 1], eval_commitments(zq, b.commitments, j));
    }
  }
  return out;
}

PartialEval partial_eval(const DvrfPublicKey& pk, const ServerKey& server, std::span<const std::uint8_t> message) {
  if (server.id == 0 || server.id > pk.n) throw std::invalid_argument("server id out of range");
  const Zq zq = pk.field();
  const Digest h = message_hash(message);
  const U256 g = hash_to_zq(zq, h);
  PartialEval p;
  p.id = server.id;
  p.value = zq.mul(server.share, g);

  ByteWriter nonce_input;
  nonce_input.raw(u256_to_bytes(server.share));
  nonce_input.raw(h);
  nonce_input.u32(server.id);
  const U256 r = zq.hash_to_nonzero(HashTag::kDvrfNonce, nonce_input.bytes());
  const U256 a1 = zq.mul(r, pk.base), a2 = zq.mul(r, g);
  p.proof.c = challenge(pk, server.id, g, p.value, a1, a2);
  p.proof.z = zq.add(r, zq.mul(p.proof.c, server.share));
  return p;
}

bool verify_partial(const DvrfPublicKey& pk, std::span<const std::uint8_t> message, const PartialEval& p) {
  if (p.id == 0 || p.id > pk.n || pk.vvk.size() != pk.n) return false;
  const Zq zq = pk.field();
  if (!zq.contains(p.value) || !zq.contains(p.proof.c) || !zq.contains(p.proof.z)) return false;
  const U256 g = hash_to_zq(zq, message_hash(message));
  const U256 a1 = zq.sub(zq.mul(p.proof.z, pk.base), zq.mul(p.proof.c, pk.vvk[p.id - 1]));
  const U256 a2 = zq.sub(zq.mul(p.proof.z, g), zq.mul(p.proof.c, p.value));
  return challenge(pk, p.id, g, p.value, a1, a2) == p.proof.c;
}

std::vector<U256> lagrange_at_zero(const Zq& zq, std::span<const std::uint32_t> ids) {
  std::vector<U256> out;
  out.reserve(ids.size());
  for (std::uint32_t i : ids) {
    U256 num = zq.from_u64(1), den = zq.from_u64(1);
    for (std::uint32_t j : ids) {
      if (j == i) continue;
      num = zq.mul(num, zq.neg(zq.from_u64(j)));
      den = zq.mul(den, zq.sub(zq.from_u64(i), zq.from_u64(j)));
    }
    out.push_back(zq.mul(num, zq.inv(den)));
  }
  return out;
}

const char* dvrf_reject_name(DvrfReject r) {
  switch (r) {
    case DvrfReject::kNone: return "accept";
    case DvrfReject::kInsufficient: return "insufficient";
    case DvrfReject::kDuplicateId: return "duplicate-id";
    case DvrfReject::kPartialProof: return "partial-proof";
    case DvrfReject::kInterpolation: return "interpolation";
  }
  return "?";
}

namespace {

U256 interpolate(const Zq& zq, std::span<const PartialEval> parts) {
  std::vector<std::uint32_t> ids;
  for (const auto& p : parts) ids.push_back(p.id);
  auto lambda = lagrange_at_zero(zq, ids);
  U256 v = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) v = zq.add(v, zq.mul(parts[k].value, lambda[k]));
  return v;
}

}  // namespace

CombineResult combine(const DvrfPublicKey& pk, std::span<const std::uint8_t> message,
                      std::span<const PartialEval> partials) {
  CombineResult res;
  std::vector<PartialEval> valid;
  std::set<std::uint32_t> seen;
  for (const PartialEval& p : partials) {
    if (seen.count(p.id)) continue;
    if (!verify_partial(pk, message, p)) {
      res.filtered.push_back(p.id);
      continue;
    }
    seen.insert(p.id);
    valid.push_back(p);
  }
  if (valid.size() < pk.t + 1) {
    res.status = DvrfReject::kInsufficient;
    return res;
  }
  std::sort(valid.begin(), valid.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  valid.resize(pk.t + 1);
  res.value = interpolate(pk.field(), valid);
  res.proof = std::move(valid);
  return res;
}

CombineResult combine_subset(const DvrfPublicKey& pk, std::span<const std::uint8_t> message,
                             std::span<const PartialEval> partials, std::span<const std::uint32_t> subset) {
  CombineResult res;
  for (std::uint32_t id : subset) {
    auto it = std::find_if(partials.begin(), partials.end(), [&](const PartialEval& p) {
      return p.id == id && verify_partial(pk, message, p);
    });
    if (it == partials.end()) {
      res.status = DvrfReject::kPartialProof;
      return res;
    }
    res.proof.push_back(*it);
  }
  if (res.proof.size() < pk.t + 1) {
    res.status = DvrfReject::kInsufficient;
    return res;
  }
  res.value = interpolate(pk.field(), res.proof);
  return res;
}

DvrfReject dvrf_verify(const DvrfPublicKey& pk, std::span<const std::uint8_t> message, const U256& value,
                       std::span<const PartialEval> proof) {
  if (proof.size() < pk.t + 1) return DvrfReject::kInsufficient;
  std::set<std::uint32_t> ids;
  for (const auto& p : proof)
    if (!ids.insert(p.id).second) return DvrfReject::kDuplicateId;
  for (const auto& p : proof)
    if (!verify_partial(pk, message, p)) return DvrfReject::kPartialProof;
  if (!pk.field().contains(value) || interpolate(pk.field(), proof) != value) return DvrfReject::kInterpolation;
  return DvrfReject::kNone;
}

std::vector<U256> interpolate_coefficients(const Zq& zq, std::span<const std::pair<U256, U256>> points) {
  const std::size_t k = points.size();
  std::vector<U256> out(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    // Basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j), built up in place.
    std::vector<U256> basis{zq.from_u64(1)};
    U256 den = zq.from_u64(1);
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      std::vector<U256> next(basis.size() + 1, 0);
      for (std::size_t d = 0; d < basis.size(); ++d) {
        next[d + 1] = zq.add(next[d + 1], basis[d]);
        next[d] = zq.sub(next[d], zq.mul(basis[d], points[j].first));
      }
      basis = std::move(next);
      den = zq.mul(den, zq.sub(points[i].first, points[j].first));
    }
    const U256 scale = zq.mul(points[i].second, zq.inv(den));
    for (std::size_t d = 0; d < k; ++d) out[d] = zq.add(out[d], zq.mul(basis[d], scale));
  }
  return out;
}

U256 eval_poly(const Zq& zq, std::span<const U256> coefficients, const U256& x) {
  U256 acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = zq.add(zq.mul(acc, x), *it);
  return acc;
}

std::string dkg_transcript_jsonl(const DkgResult& dkg) {
  std::string out;
  for (const DealerBundle& b : dkg.transcript) {
    nlohmann::ordered_json j;
    j["dealer"] = b.dealer;
    std::vector<std::string> cmts;
    for (const U256& c : b.commitments) cmts.push_back(u256_hex(c));
    j["commitments"] = cmts;
    j["qual"] = std::count(dkg.pk.qual.begin(), dkg.pk.qual.end(), b.dealer) > 0;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace pqvrf
