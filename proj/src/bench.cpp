#include "pqvrf/bench.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "pqvrf/vrf.hpp"

namespace pqvrf {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& config) {
  if (config.rounds.empty()) throw std::invalid_argument("rounds list is empty");
  if (config.reps == 0) throw std::invalid_argument("reps must be positive");
  std::vector<BenchRecord> out;
  const Drbg root(config.seed);
  for (ProofMode mode : config.modes)
    for (std::uint32_t t : config.rounds) {
      if (t == 0) throw std::invalid_argument("rounds must be positive");
      VrfOptions opt;
      opt.rounds = t;
      opt.mode = mode;
      opt.threads = config.threads;
      double keygen_ms = 0, eval_ms = 0, proof_ms = 0, verify_ms = 0;
      std::uint64_t proof_bytes = 0;
      for (std::uint32_t rep = 0; rep < config.reps; ++rep) {
        Drbg rng = root.fork(rep);
        const auto key_seed = rng.bytes<32>(), message = rng.bytes<32>(), tape_seed = rng.bytes<32>();

        auto t0 = Clock::now();
        const VrfKeyMaterial keys = vrf_gen(key_seed);
        keygen_ms += ms_since(t0);

        t0 = Clock::now();
        const Digest beta = vrf_output(keys.s, message);
        eval_ms += ms_since(t0);

        t0 = Clock::now();
        const VrfEvaluation ev = vrf_eval(keys, message, tape_seed, opt);
        proof_ms += ms_since(t0);
        const std::uint64_t bytes = serialize(ev.proof).size();
        if (proof_bytes && bytes != proof_bytes) throw std::logic_error("proof size varies across repetitions");
        proof_bytes = bytes;

        t0 = Clock::now();
        const VrfVerdict v = vrf_verify(keys.public_key(), message, ev, config.threads);
        verify_ms += ms_since(t0);
        if (!v.accepted() || ev.beta != beta) throw std::logic_error("benchmark evaluation did not verify");
      }
      const double n = config.reps;
      const std::string name = mode_name(mode);
      out.push_back({name, t, "keygen", 32, keygen_ms / n, config.reps});
      out.push_back({name, t, "eval", 32, eval_ms / n, config.reps});
      out.push_back({name, t, "proof", proof_bytes, proof_ms / n, config.reps});
      out.push_back({name, t, "verify", proof_bytes, verify_ms / n, config.reps});
    }
  return out;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = "mode,t,op,bytes,ms,reps\n";
  char buf[160];
  for (const BenchRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%u,%s,%llu,%.3f,%u\n", r.mode.c_str(), r.rounds, r.op.c_str(),
                  static_cast<unsigned long long>(r.bytes), r.ms, r.reps);
    out += buf;
  }
  return out;
}

double linear_r2(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need two or more paired points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx), a = (sy - b * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_res += (y[i] - a - b * x[i]) * (y[i] - a - b * x[i]);
    ss_tot += (y[i] - sy / n) * (y[i] - sy / n);
  }
  return ss_tot == 0 ? 1.0 : 1 - ss_res / ss_tot;
}

}  // namespace pqvrf
