// qfactory command line: parameters, keys, honest runs, networking and
// statistics. Exit codes: 0 ok, 1 protocol abort, 2 usage, 3 internal.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qfactory/hardcore.hpp"
#include "qfactory/keyfile.hpp"
#include "qfactory/protocol.hpp"
#include "qfactory/regularity.hpp"
#include "qfactory/stats.hpp"

namespace {

using namespace qfactory;

constexpr int kExitOk = 0;
constexpr int kExitAbort = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QFACTORY_SEED")) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("QFACTORY_SEED is not an unsigned integer");
  }
  return 1;
}

FamilyConfig make_family(const std::string& name, std::uint64_t n, bool allow_toy, bool same_keys) {
  FamilyConfig cfg;
  try {
    cfg.id = parse_family(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (is_insecure_toy(cfg.id) && !allow_toy) {
    throw UsageError(name + " is an insecure test family; pass --allow-toy to use it");
  }
  if (same_keys && cfg.id != FamilyId::kToyPerm) throw UsageError("--same-keys applies to toy-perm only");
  cfg.n = n;
  cfg.toy_perm_same_keys = same_keys;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

Backend make_backend(const std::string& name, const FamilyConfig& cfg) {
  Backend b;
  try {
    b = parse_backend(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (b == Backend::kStateVector && cfg.id == FamilyId::kReg2) {
    throw UsageError("the statevector backend needs a toy family; reg2 domains are too large");
  }
  return b;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

class LineSink {
 public:
  explicit LineSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct Options {
  // shared
  std::optional<std::uint64_t> seed;
  std::string family = "reg2";
  std::uint64_t n = 8;
  bool allow_toy = false;
  bool same_keys = false;
  std::string backend = "analytic";
  std::string out;
  // params
  std::uint64_t params_n = 8;
  double poly_exponent = ConstraintOptions{}.poly_exponent;
  // keygen
  std::string public_path = "reg2.pub";
  std::string trapdoor_path = "reg2.td";
  std::string json_path;
  // run
  std::uint64_t runs = 1;
  // serve / client
  std::string bind = "127.0.0.1";
  std::string host = "127.0.0.1";
  std::uint16_t port = 7878;
  std::string seed_policy = "client";
  std::optional<std::size_t> max_connections;
  std::optional<std::uint64_t> server_seed;
  // estimates
  std::uint64_t trials = 2000;
  std::size_t n_max = 32;
  bool zero_key_error = false;
  // stats
  std::vector<std::string> files;
};

int cmd_params(const Options& o) {
  LweParams p = gen_params(o.params_n);
  auto violations = check_constraints(p, ConstraintOptions{o.poly_exponent});
  nlohmann::json j = to_json(p);
  nlohmann::json report = nlohmann::json::object();
  for (int i = 1; i <= 6; ++i) report[std::to_string(i)] = "pass";
  for (const auto& v : violations) report[std::to_string(v.index)] = "fail: " + v.detail;
  j["constraints"] = report;
  j["all_pass"] = violations.empty();
  std::cout << j.dump(2) << "\n";
  return violations.empty() ? kExitOk : kExitInternal;
}

int cmd_keygen(const Options& o) {
  Rng rng(resolve_seed(o.seed));
  LweParams p = gen_params(o.n);
  auto [key, td] = reg2_gen(p, rng);
  write_bytes(o.public_path, write_key(key));
  write_bytes(o.trapdoor_path, write_trapdoor(p, td));
  if (!o.json_path.empty()) {
    std::ofstream out(o.json_path);
    out << nlohmann::json{{"public", to_json(key)}, {"trapdoor", to_json(td)}}.dump(2) << "\n";
  }
  std::cerr << "wrote " << o.public_path << " and " << o.trapdoor_path << " (" << p.describe() << ")\n";
  return kExitOk;
}

int cmd_run(const Options& o) {
  FamilyConfig cfg = make_family(o.family, o.n, o.allow_toy, o.same_keys);
  Backend backend = make_backend(o.backend, cfg);
  if (o.runs == 0) throw UsageError("--runs must be positive");
  auto transcripts = run_batch(cfg, backend, o.runs, resolve_seed(o.seed));
  LineSink sink(o.out);
  for (const auto& t : transcripts) sink.out() << t.to_line() << "\n";
  auto stats = compute_stats(transcripts);
  std::cerr << "runs=" << stats.runs << " aborts=" << stats.aborts;
  if (stats.fidelity_count > 0) std::cerr << " min_fidelity=" << stats.fidelity_min;
  std::cerr << "\n";
  if (o.runs == 1 && stats.aborts == 1) return kExitAbort;
  return kExitOk;
}

int cmd_serve(const Options& o) {
  ServerConfig sc;
  sc.family = make_family(o.family, o.n, o.allow_toy, o.same_keys);
  sc.backend = make_backend(o.backend, sc.family);
  try {
    sc.seed_policy = parse_seed_policy(o.seed_policy);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  sc.fixed_seed = resolve_seed(o.seed);
  Rng seed_source(sc.fixed_seed, 0xfeed);
  std::mutex mu;
  LineSink sink(o.out);
  TcpServer server(o.bind, o.port);
  std::cerr << "listening on " << o.bind << ":" << server.port() << " (" << sc.family.descriptor()
            << ", " << backend_name(sc.backend) << ")\n";
  server.run(
      [&](Transport& t) {
        Rng local(0);
        {
          std::lock_guard lock(mu);
          local = Rng(seed_source.next_u64());
        }
        ServerReport rep = run_server(t, sc, &local);
        std::lock_guard lock(mu);
        sink.out() << rep.to_json().dump() << std::endl;
      },
      o.max_connections);
  return kExitOk;
}

int cmd_client(const Options& o) {
  FamilyConfig cfg = make_family(o.family, o.n, o.allow_toy, o.same_keys);
  const std::uint64_t seed = resolve_seed(o.seed);
  auto transport = tcp_connect(o.host, o.port);
  Transcript t = run_client(*transport, cfg, seed, o.server_seed);
  transport->close();
  LineSink sink(o.out);
  sink.out() << t.to_line() << "\n";
  if (auto* r = std::get_if<QubitAngle>(&t.outcome)) {
    std::cerr << "theta = " << r->r << " * pi/4\n";
    return kExitOk;
  }
  std::cerr << "abort: " << std::get<Abort>(t.outcome).reason << "\n";
  return kExitAbort;
}

int cmd_estimate_delta(const Options& o) {
  LweParams p = gen_params(o.n);
  DeltaOptions opts;
  opts.gen.zero_key_error = o.zero_key_error;
  auto est = estimate_delta(p, o.trials, resolve_seed(o.seed), opts);
  const double closed = domain_addition_probability(p.m(), static_cast<double>(p.mu),
                                                    static_cast<double>(p.mu_prime()));
  nlohmann::json j = {{"n", p.n},
                      {"trials", est.trials},
                      {"two_preimages", est.two_preimages},
                      {"one_preimage", est.one_preimage},
                      {"failures", est.failures},
                      {"claw_violations", est.claw_violations},
                      {"delta", est.point},
                      {"standard_error", est.standard_error},
                      {"wilson_95", {est.wilson_low, est.wilson_high}},
                      {"closed_form", closed}};
  std::cout << j.dump(2) << "\n";
  return est.claw_violations == 0 ? kExitOk : kExitInternal;
}

int print_report(const IdentityReport& r) {
  nlohmann::json j = {{"identity_checks", r.identity_checks},
                      {"decomposition_checks", r.decomposition_checks},
                      {"counterexamples", r.counterexamples}};
  std::cout << j.dump(2) << "\n";
  return r.ok() ? kExitOk : kExitInternal;
}

int cmd_verify_hardcore(const Options& o) {
  return print_report(verify_decomposition(o.trials, o.n_max, resolve_seed(o.seed)));
}

int cmd_verify_identities(const Options& o) {
  return print_report(verify_identities(o.trials, resolve_seed(o.seed)));
}

int cmd_stats(const Options& o) {
  std::vector<Transcript> all;
  for (const auto& path : o.files) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        all.push_back(Transcript::from_json(nlohmann::json::parse(line)));
      } catch (const std::exception& e) {
        throw Error(ErrorCode::kParse, path + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  std::cout << compute_stats(all).to_json().dump(2) << "\n";
  return kExitOk;
}

void add_family_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family, "reg2, toy-linear or toy-perm")->capture_default_str();
  cmd->add_option("--n", o.n, "security parameter (reg2) or input bits (toy)")->capture_default_str();
  cmd->add_flag("--allow-toy", o.allow_toy, "permit the insecure toy families");
  cmd->add_flag("--same-keys", o.same_keys, "toy-perm: use one permutation for both keys");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfactory: remote preparation of pseudo-secret |+_theta> qubits"};
  app.require_subcommand(1);
  Options o;
  int (*handler)(const Options&) = nullptr;

  auto* params = app.add_subcommand("params", "print parameters and the constraint report");
  params->add_option("n", o.params_n, "security parameter")->required();
  params->add_option("--poly-exponent", o.poly_exponent, "exponent c in the n^c bound")->capture_default_str();
  params->callback([&] { handler = cmd_params; });

  auto* keygen = app.add_subcommand("keygen", "generate a reg2 key pair");
  keygen->add_option("--n", o.n)->capture_default_str();
  keygen->add_option("--seed", o.seed);
  keygen->add_option("--public", o.public_path)->capture_default_str();
  keygen->add_option("--trapdoor", o.trapdoor_path)->capture_default_str();
  keygen->add_option("--json", o.json_path, "also dump both keys as JSON");
  keygen->callback([&] { handler = cmd_keygen; });

  auto* run = app.add_subcommand("run", "honest in-process runs, one transcript per line");
  add_family_flags(run, o);
  run->add_option("--backend", o.backend, "analytic or statevector")->capture_default_str();
  run->add_option("--runs", o.runs)->capture_default_str();
  run->add_option("--seed", o.seed);
  run->add_option("--out", o.out, "transcript file (default stdout)");
  run->callback([&] { handler = cmd_run; });

  auto* serve = app.add_subcommand("serve", "run the server over TCP");
  add_family_flags(serve, o);
  serve->add_option("--backend", o.backend)->capture_default_str();
  serve->add_option("--bind", o.bind)->capture_default_str();
  serve->add_option("--port", o.port)->capture_default_str();
  serve->add_option("--seed-policy", o.seed_policy, "client, fixed or random")->capture_default_str();
  serve->add_option("--seed", o.seed, "fixed seed, or the source of random seeds");
  serve->add_option("--max-connections", o.max_connections);
  serve->add_option("--out", o.out, "server log (default stdout)");
  serve->callback([&] { handler = cmd_serve; });

  auto* client = app.add_subcommand("client", "run one client session over TCP");
  add_family_flags(client, o);
  client->add_option("--host", o.host)->capture_default_str();
  client->add_option("--port", o.port)->capture_default_str();
  client->add_option("--seed", o.seed);
  client->add_option("--server-seed", o.server_seed, "seed requested from the server");
  client->add_option("--out", o.out, "transcript file (default stdout)");
  client->callback([&] { handler = cmd_client; });

  auto* delta = app.add_subcommand("estimate-delta", "Monte Carlo two-preimage rate of reg2");
  delta->add_option("--n", o.n)->capture_default_str();
  delta->add_option("--trials", o.trials)->capture_default_str();
  delta->add_option("--seed", o.seed);
  delta->add_flag("--zero-key-error", o.zero_key_error, "use e0 = 0");
  delta->callback([&] { handler = cmd_estimate_delta; });

  auto* hard = app.add_subcommand("verify-hardcore", "check the three-bit decomposition");
  hard->add_option("--trials", o.trials)->capture_default_str();
  hard->add_option("--n-max", o.n_max)->capture_default_str();
  hard->add_option("--seed", o.seed);
  hard->callback([&] { handler = cmd_verify_hardcore; });

  auto* ident = app.add_subcommand("verify-identities", "check the modular identities");
  ident->add_option("--trials", o.trials)->capture_default_str();
  ident->add_option("--seed", o.seed);
  ident->callback([&] { handler = cmd_verify_identities; });

  auto* stats = app.add_subcommand("stats", "summarise transcript files");
  stats->add_option("files", o.files)->required()->check(CLI::ExistingFile);
  stats->callback([&] { handler = cmd_stats; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return handler(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
