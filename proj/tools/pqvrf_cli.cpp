// pqvrf command line. Talks to the library through pqvrf.h only.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pqvrf.h"

namespace fs = std::filesystem;

namespace {

constexpr int kAccept = 0, kReject = 1, kUsage = 2;

// Raised for anything that should end the process with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Bytes = std::unique_ptr<pqvrf_bytes, Deleter<pqvrf_bytes, pqvrf_bytes_free>>;
using Keypair = std::unique_ptr<pqvrf_keypair, Deleter<pqvrf_keypair, pqvrf_keypair_free>>;
using PublicKey = std::unique_ptr<pqvrf_public_key, Deleter<pqvrf_public_key, pqvrf_public_key_free>>;
using Evaluation = std::unique_ptr<pqvrf_evaluation, Deleter<pqvrf_evaluation, pqvrf_evaluation_free>>;
using Beacon = std::unique_ptr<pqvrf_beacon, Deleter<pqvrf_beacon, pqvrf_beacon_free>>;
using Pos = std::unique_ptr<pqvrf_pos, Deleter<pqvrf_pos, pqvrf_pos_free>>;

void check(pqvrf_status s, const std::string& what) {
  if (s != PQVRF_OK) throw UsageError(what + ": " + pqvrf_status_name(s) + ": " + pqvrf_last_error());
}

std::string text(const pqvrf_bytes* b) {
  return {reinterpret_cast<const char*>(pqvrf_bytes_data(b)), pqvrf_bytes_size(b)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, std::string_view data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

std::string hex(const uint8_t* p, size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (size_t i = 0; i < n; ++i) {
    s += digits[p[i] >> 4];
    s += digits[p[i] & 15];
  }
  return s;
}

std::vector<uint8_t> seed_bytes(uint64_t seed) {
  std::vector<uint8_t> out(8);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(seed >> (8 * i));
  return out;
}

// --seed, else PQVRF_SEED, else fresh entropy; the choice is echoed so runs can
// be replayed.
uint64_t resolve_seed(const std::optional<uint64_t>& flag) {
  if (flag) {
    std::cerr << "seed: " << *flag << " (from --seed)\n";
    return *flag;
  }
  if (const char* env = std::getenv("PQVRF_SEED")) {
    try {
      size_t used = 0;
      const uint64_t v = std::stoull(env, &used, 0);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      std::cerr << "seed: " << v << " (from PQVRF_SEED)\n";
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string("PQVRF_SEED is not an integer: ") + env);
    }
  }
  std::random_device rd;
  const uint64_t v = (uint64_t(rd()) << 32) ^ rd();
  std::cerr << "seed: " << v << " (fresh; pass --seed " << v << " to replay)\n";
  return v;
}

// key=value lines, '#' comments. Injected ahead of the real flags so the
// command line wins.
std::vector<std::string> config_args(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(n) + ": empty key");
    std::replace(key.begin(), key.end(), '_', '-');
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

// Pulls --config FILE out of argv and splices its pairs in after the
// subcommand name.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> from_file;
  for (size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      continue;
    }
    auto more = config_args(path);
    from_file.insert(from_file.end(), more.begin(), more.end());
    --i;
  }
  if (!from_file.empty()) {
    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.rfind("-", 0) != 0; });
    if (sub == args.end()) throw UsageError("--config needs a subcommand");
    args.insert(sub + 1, from_file.begin(), from_file.end());
  }
  return args;
}

std::string message_of(const std::string& message, const std::string& file) {
  if (!file.empty()) return read_file(file);
  return message;
}

struct Common {
  std::optional<uint64_t> seed;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed (else $PQVRF_SEED, else fresh entropy)");
  cmd->add_option("--threads", c.threads, "upper bound on worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-quantum VRF, threshold beacon and PoS lottery tools"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pqvrf_version()));
  app.add_option("--config", "key=value file; flags on the command line override it");

  Common common;
  std::string out_dir = ".", pk_path, sk_path, eval_path, message, message_file, out_path;
  uint32_t rounds = 137;
  std::string mode = "zkb++";

  auto* keygen = app.add_subcommand("keygen", "generate a key pair (pk.json, sk.json)");
  add_common(keygen, common);
  keygen->add_option("--out-dir", out_dir, "directory for pk.json and sk.json");

  auto* eval = app.add_subcommand("eval", "evaluate with proof");
  add_common(eval, common);
  eval->add_option("--pk", pk_path)->required();
  eval->add_option("--sk", sk_path)->required();
  auto* msg_opt = eval->add_option("--message", message);
  eval->add_option("--message-file", message_file)->excludes(msg_opt);
  eval->add_option("--out", out_path, "evaluation file")->required();
  eval->add_option("--rounds", rounds, "parallel repetitions t")->check(CLI::PositiveNumber);
  eval->add_option("--mode", mode, "zkboo or zkb++");

  auto* verify = app.add_subcommand("verify", "verify an evaluation; exit 0 accept, 1 reject");
  verify->add_option("--threads", common.threads)->check(CLI::PositiveNumber);
  verify->add_option("--pk", pk_path)->required();
  auto* vmsg_opt = verify->add_option("--message", message);
  verify->add_option("--message-file", message_file)->excludes(vmsg_opt);
  verify->add_option("--proof", eval_path, "evaluation file from eval")->required();

  std::vector<uint32_t> bench_rounds{20, 40, 60, 80, 100};
  std::string bench_mode = "both";
  uint32_t reps = 3;
  auto* bench = app.add_subcommand("bench", "proof size and timing table as CSV");
  add_common(bench, common);
  bench->add_option("--rounds", bench_rounds)->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--mode", bench_mode, "zkboo, zkb++ or both");
  bench->add_option("--reps", reps)->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "CSV file (default stdout)");

  uint32_t n = 4, t = 1, beacon_rounds = 10;
  std::vector<uint32_t> byzantine;
  std::string behavior = "silent", sd0_hex;
  bool bft = false;
  auto* beacon = app.add_subcommand("beacon", "run the threshold beacon");
  add_common(beacon, common);
  beacon->add_option("--n", n, "servers")->check(CLI::PositiveNumber);
  beacon->add_option("--t", t, "threshold; t+1 partials combine");
  beacon->add_option("--rounds", beacon_rounds);
  beacon->add_option("--byzantine", byzantine, "comma-separated server ids")->delimiter(',');
  beacon->add_option("--behavior", behavior, "silent, corrupt-value or equivocate");
  beacon->add_flag("--bft", bft, "also require n >= 3f+1 and t >= f");
  beacon->add_option("--sd0", sd0_hex, "genesis seed, 64 hex digits");
  beacon->add_option("--out-dir", out_dir, "where transcript.jsonl, dkg.jsonl, summary.json go");

  pqvrf_pos_params pp;
  pqvrf_pos_params_default(&pp);
  std::string adversary = pp.adversary;
  auto* pos = app.add_subcommand("pos", "simulate the PoS lottery chain");
  add_common(pos, common);
  pos->add_option("--nodes", pp.nodes)->check(CLI::PositiveNumber);
  pos->add_option("--alpha", pp.alpha, "adversarial stake ratio")->check(CLI::Range(0.0, 1.0));
  pos->add_option("--stake", pp.stake_per_node, "stake units per node");
  pos->add_option("--slots", pp.slots)->check(CLI::PositiveNumber);
  pos->add_option("--delta", pp.delta, "maximum delivery delay in slots");
  pos->add_option("--leaders", pp.leaders_per_slot, "expected leaders per slot")->check(CLI::PositiveNumber);
  pos->add_option("--adversary", adversary, "honest, withhold or grind-lite");
  pos->add_option("--proof-every", pp.proof_every, "attach a full proof to every k-th block (0 = off)");
  pos->add_option("--proof-rounds", pp.proof_rounds)->check(CLI::PositiveNumber);
  pos->add_option("--window", pp.window, "chain quality / growth window")->check(CLI::PositiveNumber);
  pos->add_option("--out-dir", out_dir, "where slots.csv and summary.json go");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*keygen) {
      const uint64_t seed = resolve_seed(common.seed);
      const auto sb = seed_bytes(seed);
      pqvrf_keypair* raw = nullptr;
      check(pqvrf_keygen(sb.data(), sb.size(), &raw), "keygen");
      Keypair kp(raw);
      pqvrf_bytes *pub = nullptr, *sec = nullptr;
      check(pqvrf_keypair_public_json(kp.get(), &pub), "keygen");
      Bytes pub_b(pub);
      check(pqvrf_keypair_secret_json(kp.get(), &sec), "keygen");
      Bytes sec_b(sec);
      write_file(fs::path(out_dir) / "pk.json", text(pub));
      write_file(fs::path(out_dir) / "sk.json", text(sec));
      std::cout << "wrote " << (fs::path(out_dir) / "pk.json").string() << " and "
                << (fs::path(out_dir) / "sk.json").string() << "\n";
      return kAccept;
    }

    if (*eval) {
      const std::string pub = read_file(pk_path), sec = read_file(sk_path);
      pqvrf_keypair* raw = nullptr;
      check(pqvrf_keypair_load(pub.c_str(), sec.c_str(), &raw), "loading keys");
      Keypair kp(raw);
      const std::string m = message_of(message, message_file);
      const uint64_t seed = resolve_seed(common.seed);
      const auto sb = seed_bytes(seed);
      pqvrf_evaluation* ev_raw = nullptr;
      check(pqvrf_eval(kp.get(), reinterpret_cast<const uint8_t*>(m.data()), m.size(), sb.data(), sb.size(), rounds,
                       mode.c_str(), common.threads, &ev_raw),
            "eval");
      Evaluation ev(ev_raw);
      pqvrf_bytes* blob = nullptr;
      check(pqvrf_evaluation_serialize(ev.get(), &blob), "eval");
      Bytes blob_b(blob);
      write_file(out_path, text(blob));
      uint8_t beta[32];
      check(pqvrf_evaluation_beta(ev.get(), beta), "eval");
      std::cout << hex(beta, 32) << "\n";
      return kAccept;
    }

    if (*verify) {
      const std::string pub = read_file(pk_path);
      pqvrf_public_key* raw = nullptr;
      check(pqvrf_public_key_load(pub.c_str(), &raw), "loading public key");
      PublicKey pk(raw);
      const std::string m = message_of(message, message_file);
      const std::string blob = read_file(eval_path);
      pqvrf_evaluation* ev_raw = nullptr;
      const pqvrf_status ls =
          pqvrf_evaluation_load(reinterpret_cast<const uint8_t*>(blob.data()), blob.size(), &ev_raw);
      if (ls != PQVRF_OK) {
        std::cout << "reject: malformed evaluation (" << pqvrf_last_error() << ")\n";
        return kReject;
      }
      Evaluation ev(ev_raw);
      const pqvrf_status s =
          pqvrf_verify(pk.get(), reinterpret_cast<const uint8_t*>(m.data()), m.size(), ev.get(), common.threads);
      if (s == PQVRF_OK) {
        uint8_t beta[32];
        check(pqvrf_evaluation_beta(ev.get(), beta), "verify");
        std::cout << "accept " << hex(beta, 32) << "\n";
        return kAccept;
      }
      if (s == PQVRF_REJECT) {
        std::cout << "reject: " << pqvrf_last_error() << "\n";
        return kReject;
      }
      check(s, "verify");
    }

    if (*bench) {
      pqvrf_bench_params bp{bench_rounds.data(), bench_rounds.size(), bench_mode.c_str(), reps, common.threads,
                            resolve_seed(common.seed)};
      pqvrf_bytes* csv = nullptr;
      check(pqvrf_bench(&bp, &csv), "bench");
      Bytes csv_b(csv);
      if (out_path.empty()) std::cout << text(csv);
      else write_file(out_path, text(csv));
      return kAccept;
    }

    if (*beacon) {
      pqvrf_beacon_params bp;
      pqvrf_beacon_params_default(&bp);
      bp.n = n;
      bp.t = t;
      bp.rounds = beacon_rounds;
      bp.byzantine = byzantine.data();
      bp.byzantine_len = byzantine.size();
      bp.behavior = behavior.c_str();
      bp.bft_sizing = bft;
      std::vector<uint8_t> sd0;
      if (!sd0_hex.empty()) {
        if (sd0_hex.size() != 64 || sd0_hex.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
          throw UsageError("--sd0 must be 64 hex digits");
        for (size_t i = 0; i < 64; i += 2) sd0.push_back(static_cast<uint8_t>(std::stoul(sd0_hex.substr(i, 2), nullptr, 16)));
        bp.sd0 = sd0.data();
      }
      check(pqvrf_beacon_validate(&bp), "beacon");
      bp.seed = resolve_seed(common.seed);
      pqvrf_beacon* raw = nullptr;
      check(pqvrf_beacon_run(&bp, &raw), "beacon");
      Beacon run(raw);
      pqvrf_bytes *tr = nullptr, *dkg = nullptr, *sum = nullptr;
      check(pqvrf_beacon_transcript(run.get(), &tr), "beacon");
      Bytes tr_b(tr);
      check(pqvrf_beacon_dkg_transcript(run.get(), &dkg), "beacon");
      Bytes dkg_b(dkg);
      check(pqvrf_beacon_summary(run.get(), &sum), "beacon");
      Bytes sum_b(sum);
      write_file(fs::path(out_dir) / "transcript.jsonl", text(tr));
      write_file(fs::path(out_dir) / "dkg.jsonl", text(dkg));
      write_file(fs::path(out_dir) / "summary.json", text(sum));
      std::cout << "finalized " << pqvrf_beacon_finalized(run.get()) << "/" << beacon_rounds << " rounds\n";
      return kAccept;
    }

    if (*pos) {
      pp.adversary = adversary.c_str();
      if (pqvrf_pos_honest_majority_violated(&pp))
        std::cerr << "warning: alpha = " << pp.alpha
                  << " violates the honest-majority assumption (alpha < 1/2); running anyway\n";
      pp.seed = resolve_seed(common.seed);
      pqvrf_pos* raw = nullptr;
      check(pqvrf_pos_run(&pp, &raw), "pos");
      Pos run(raw);
      pqvrf_bytes *csv = nullptr, *sum = nullptr;
      check(pqvrf_pos_slots_csv(run.get(), &csv), "pos");
      Bytes csv_b(csv);
      check(pqvrf_pos_summary(run.get(), &sum), "pos");
      Bytes sum_b(sum);
      write_file(fs::path(out_dir) / "slots.csv", text(csv));
      write_file(fs::path(out_dir) / "summary.json", text(sum));
      std::cout << text(sum);
      return kAccept;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
