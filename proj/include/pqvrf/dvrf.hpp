#pragma once

// Threshold (t, n) distributed VRF over Z_q.
//
// Dealing is Feldman-style with commit(x) = x * R mod q for a public,
// hash-derived R, and every dealer also publishes the degree-0 commitment.
// Evaluation is key-linear: Eval(x, h) = x * H2q(h), so partial values
// interpolate exactly. Each partial carries a Fiat-Shamir sigma proof that
// v_i and vvk_i share the same discrete factor x_i. The commitment is binding
// but not hiding; see the README.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqvrf/zq.hpp"

namespace pqvrf {

struct DealerBundle {
  std::uint32_t dealer = 0;
  /// cmt_k = a_k * R for k = 0..t.
  std::vector<U256> commitments;
  /// shares[j - 1] = f(j), addressed to server j. Private.
  std::vector<U256> shares;
};

struct DvrfPublicKey {
  U256 q;
  U256 base;  // R
  std::uint32_t n = 0;
  std::uint32_t t = 0;
  U256 vpk;                  // vsk* * R
  std::vector<U256> vvk;     // vvk[i - 1] = vsk_i * R
  std::vector<std::uint32_t> qual;

  Zq field() const { return Zq(q); }
};

struct ServerKey {
  std::uint32_t id = 0;
  U256 share;
};

struct DkgResult {
  DvrfPublicKey pk;
  std::vector<ServerKey> servers;
  std::vector<DealerBundle> transcript;
};

/// Injected faults for the simulated deal.
struct DkgFaults {
  /// Dealers whose coefficient commitment k = 1 (or 0 when t = 0) is shifted.
  std::vector<std::uint32_t> corrupt_commitment;
  /// (dealer, recipient) pairs whose private share is shifted.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> corrupt_share;
};

/// Throws std::invalid_argument unless 1 <= n and t < n.
DkgResult dist_keygen(std::uint32_t n, std::uint32_t t, std::span<const std::uint8_t> rng_seed,
                      const U256& q = default_dvrf_prime(), const DkgFaults& faults = {});

/// Public commitment base R for modulus q.
U256 dvrf_base(const Zq& zq);

/// sum_k cmt_k * j^k == ssk * R. Throws std::invalid_argument for j = 0.
bool verify_share(const Zq& zq, const U256& base, std::span<const U256> commitments, std::uint32_t j,
                  const U256& share);

/// H2q(h): hash of h into Z_q \ {0}.
U256 hash_to_zq(const Zq& zq, const Digest& h);

struct PartialProof {
  U256 c;
  U256 z;
  friend bool operator==(const PartialProof&, const PartialProof&) = default;
};

struct PartialEval {
  std::uint32_t id = 0;
  U256 value;
  PartialProof proof;
  friend bool operator==(const PartialEval&, const PartialEval&) = default;
};

PartialEval partial_eval(const DvrfPublicKey& pk, const ServerKey& server, std::span<const std::uint8_t> message);
bool verify_partial(const DvrfPublicKey& pk, std::span<const std::uint8_t> message, const PartialEval& partial);

/// lambda_{0,i,I} for every i in `ids` (distinct, non-zero).
std::vector<U256> lagrange_at_zero(const Zq& zq, std::span<const std::uint32_t> ids);

enum class DvrfReject { kNone, kInsufficient, kDuplicateId, kPartialProof, kInterpolation };
const char* dvrf_reject_name(DvrfReject r);

struct CombineResult {
  DvrfReject status = DvrfReject::kNone;
  U256 value;
  /// The (t+1)-subset used; each carries its own proof.
  std::vector<PartialEval> proof;
  /// Ids whose partials were dropped because their proof did not verify.
  std::vector<std::uint32_t> filtered;

  bool ok() const { return status == DvrfReject::kNone; }
};

/// Drops partials whose proof fails and later duplicates of an id, then
/// interpolates over the t+1 smallest surviving ids.
CombineResult combine(const DvrfPublicKey& pk, std::span<const std::uint8_t> message,
                      std::span<const PartialEval> partials);

/// Same, but interpolates over the given id subset (all must be valid).
CombineResult combine_subset(const DvrfPublicKey& pk, std::span<const std::uint8_t> message,
                             std::span<const PartialEval> partials, std::span<const std::uint32_t> subset);

DvrfReject dvrf_verify(const DvrfPublicKey& pk, std::span<const std::uint8_t> message, const U256& value,
                       std::span<const PartialEval> proof);

/// Coefficients (low degree first) of the unique polynomial of degree
/// points.size() - 1 through the given (x, y) points with distinct x.
std::vector<U256> interpolate_coefficients(const Zq& zq, std::span<const std::pair<U256, U256>> points);
U256 eval_poly(const Zq& zq, std::span<const U256> coefficients, const U256& x);

/// One JSON object per dealer: id, commitments, QUAL membership.
std::string dkg_transcript_jsonl(const DkgResult& dkg);

}  // namespace pqvrf
