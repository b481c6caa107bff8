#include "qfactory/protocol.hpp"

#include <random>
#include <thread>

#include "qfactory/codec.hpp"

namespace qfactory {

std::string backend_name(Backend b) {
  return b == Backend::kAnalytic ? "analytic" : "statevector";
}

Backend parse_backend(const std::string& name) {
  if (name == "analytic") return Backend::kAnalytic;
  if (name == "statevector") return Backend::kStateVector;
  throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + name + "'");
}

SeedPolicy parse_seed_policy(const std::string& s) {
  if (s == "client") return SeedPolicy::kClient;
  if (s == "fixed") return SeedPolicy::kFixed;
  if (s == "random") return SeedPolicy::kRandom;
  throw Error(ErrorCode::kInvalidArgument, "unknown seed policy '" + s + "'");
}

ThetaOutcome client_theta(const BitString& x, const BitString& xp, const std::vector<int>& alphas,
                          const BitString& b) {
  if (x.empty() || x.size() != xp.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "claw halves differ in length");
  }
  if (x.back() == xp.back()) return Abort{"claw agrees on the output bit"};
  return QubitAngle{theta_r(x, xp, alphas, b)};
}

// ---- client ----

ClientSession::ClientSession(const FamilyConfig& config, std::uint64_t seed)
    : config_(config), rng_(seed), keys_(generate_keys(config, rng_)) {
  alphas_.resize(keys_.pub->domain_bits() - 1);
  for (auto& a : alphas_) a = static_cast<int>(rng_.uniform_int(0, 7));
}

std::variant<std::vector<int>, Abort> ClientSession::on_y(const Bytes& y) {
  if (phase_ != Phase::kAwaitY) throw Error(ErrorCode::kProtocol, "client is not waiting for y");
  ClawResult inv = keys_.secret->invert(y);
  Abort abort;
  if (auto* claw = std::get_if<Claw>(&inv)) {
    if (claw->x.back() != claw->xp.back()) {
      claw_ = *claw;
      phase_ = Phase::kAwaitB;
      return alphas_;
    }
    abort.reason = "claw agrees on the output bit";
  } else if (std::holds_alternative<SinglePreimage>(inv)) {
    abort.reason = "no second preimage";
  } else {
    abort.reason = "inversion failed: " + std::get<InversionFailure>(inv).reason;
  }
  phase_ = Phase::kAborted;
  outcome_ = abort;
  return abort;
}

ThetaOutcome ClientSession::on_b(const BitString& b) {
  if (phase_ != Phase::kAwaitB) throw Error(ErrorCode::kProtocol, "client is not waiting for b");
  if (b.size() != alphas_.size()) {
    throw Error(ErrorCode::kProtocol, "outcome count does not match the instruction");
  }
  outcome_ = client_theta(claw_->x, claw_->xp, alphas_, b);
  phase_ = std::holds_alternative<Abort>(*outcome_) ? Phase::kAborted : Phase::kDone;
  return *outcome_;
}

// ---- server ----

ServerSession::ServerSession(std::shared_ptr<const PublicFunction> f, Backend backend,
                             std::uint64_t seed)
    : f_(std::move(f)), backend_(backend), rng_(seed) {
  if (backend_ == Backend::kStateVector &&
      f_->domain_bits() > static_cast<std::size_t>(StateVector::kMaxQubits)) {
    throw Error(ErrorCode::kSizeLimit, "domain too large for the state-vector backend");
  }
}

Bytes ServerSession::prepare() {
  if (phase_ != Phase::kPrepare) throw Error(ErrorCode::kProtocol, "server already prepared");
  BitString x = f_->sample_domain(rng_);
  Bytes y = f_->eval(x);
  if (backend_ == Backend::kStateVector) state_ = sv_prepare_superposition(f_->enumerate_preimages(y));
  phase_ = Phase::kAwaitInstruction;
  return y;
}

BitString ServerSession::measure(const std::vector<int>& alphas) {
  if (phase_ != Phase::kAwaitInstruction) throw Error(ErrorCode::kProtocol, "server is not ready to measure");
  if (alphas.size() + 1 != f_->domain_bits()) {
    throw Error(ErrorCode::kProtocol, "instruction must have one alpha per non-output qubit");
  }
  BitString b;
  if (backend_ == Backend::kStateVector) {
    StageTwoResult res = sv_run_stage2(std::move(*state_), alphas, rng_);
    state_.reset();
    output_ = res.output;
    b = std::move(res.b);
  } else {
    b.resize(alphas.size());
    for (auto& bit : b) bit = rng_.uniform01() < 0.5 ? 0 : 1;
  }
  phase_ = Phase::kDone;
  return b;
}

// ---- transcripts ----

namespace {

nlohmann::json bits_json(const BitString& b) {
  nlohmann::json out = nlohmann::json::array();
  for (auto v : b) out.push_back(static_cast<int>(v));
  return out;
}

std::string k_hash_of(const Bytes& key) { return to_hex(sha256(key)); }

}  // namespace

nlohmann::json Transcript::to_json() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["family"] = family;
  j["n"] = n;
  j["k_hash"] = k_hash;
  j["alpha"] = alpha;
  j["y_b64"] = base64_encode(y);
  j["b"] = bits_json(b);
  if (auto* r = std::get_if<QubitAngle>(&outcome)) {
    j["outcome"] = {{"theta_r", r->r}};
  } else {
    j["outcome"] = {{"abort", {{"reason", std::get<Abort>(outcome).reason}}}};
  }
  j["seeds"] = {{"client", client_seed}, {"server", server_seed}};
  if (fidelity) j["fidelity"] = *fidelity;
  return j;
}

std::string Transcript::to_line() const { return to_json().dump(); }

Transcript Transcript::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kVersion) throw Error(ErrorCode::kParse, "unsupported transcript version");
    Transcript t;
    t.family = j.at("family").get<std::string>();
    t.n = j.at("n").get<std::uint64_t>();
    t.k_hash = j.at("k_hash").get<std::string>();
    t.alpha = j.at("alpha").get<std::vector<int>>();
    t.y = base64_decode(j.at("y_b64").get<std::string>());
    for (int v : j.at("b").get<std::vector<int>>()) t.b.push_back(static_cast<std::uint8_t>(v));
    const auto& o = j.at("outcome");
    if (o.contains("theta_r")) {
      t.outcome = QubitAngle{o.at("theta_r").get<int>()};
    } else {
      t.outcome = Abort{o.at("abort").at("reason").get<std::string>()};
    }
    t.client_seed = j.at("seeds").at("client").get<std::uint64_t>();
    t.server_seed = j.at("seeds").at("server").get<std::uint64_t>();
    if (j.contains("fidelity")) t.fidelity = j.at("fidelity").get<double>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad transcript: ") + e.what());
  }
}

nlohmann::json ServerReport::to_json() const {
  nlohmann::json j;
  j["completed"] = completed;
  j["seed"] = seed;
  j["k_hash"] = k_hash;
  j["y_b64"] = base64_encode(y);
  j["alpha"] = alpha;
  j["b"] = bits_json(b);
  if (result) {
    j["result"] = result->ok ? nlohmann::json("ok") : nlohmann::json({{"abort", result->abort_reason}});
  }
  if (error_sent) {
    j["error"] = {{"code", error_kind_name(error_sent->code)}, {"detail", error_sent->detail}};
  }
  return j;
}

// ---- drivers ----

namespace {

template <class T>
T expect(Transport& t) {
  WireMessage m = t.receive();
  if (auto* v = std::get_if<T>(&m)) return std::move(*v);
  if (auto* e = std::get_if<wire::ErrorMsg>(&m)) throw RemoteError(*e);
  throw Error(ErrorCode::kProtocol, "unexpected " + message_name(m) + " message");
}

}  // namespace

Transcript run_client(Transport& t, const FamilyConfig& config, std::uint64_t client_seed,
                      std::optional<std::uint64_t> requested_server_seed) {
  config.validate();
  wire::Hello hello;
  hello.params_digest = config.digest();
  hello.family_id = static_cast<std::uint8_t>(config.id);
  hello.seed = requested_server_seed;
  t.send(hello);
  auto reply = expect<wire::Hello>(t);
  if (reply.version != kProtocolVersion || reply.params_digest != hello.params_digest ||
      reply.family_id != hello.family_id || !reply.seed) {
    throw Error(ErrorCode::kProtocol, "server hello does not match");
  }

  ClientSession client(config, client_seed);
  Bytes key = client.public_key_bytes();
  t.send(wire::PublicKey{key});

  Transcript tr;
  tr.family = family_name(config.id);
  tr.n = config.n;
  tr.k_hash = k_hash_of(key);
  tr.alpha = client.alphas();
  tr.client_seed = client_seed;
  tr.server_seed = *reply.seed;
  tr.y = expect<wire::MeasuredY>(t).bytes;

  auto step = client.on_y(tr.y);
  if (auto* abort = std::get_if<Abort>(&step)) {
    t.send(wire::Result{false, abort->reason});
    tr.outcome = *abort;
    return tr;
  }
  t.send(wire::MeasureInstruction{std::get<std::vector<int>>(step)});
  tr.b = expect<wire::Outcomes>(t).b;
  tr.outcome = client.on_b(tr.b);
  if (auto* abort = std::get_if<Abort>(&tr.outcome)) {
    t.send(wire::Result{false, abort->reason});
  } else {
    t.send(wire::Result{true, {}});
  }
  return tr;
}

ServerReport run_server(Transport& t, const ServerConfig& config, Rng* seed_source) {
  ServerReport rep;
  auto fail = [&](wire::ErrorKind kind, const std::string& detail) {
    wire::ErrorMsg m{kind, detail};
    try {
      t.send(m);
    } catch (const std::exception&) {
    }
    rep.error_sent = m;
    t.close();
    return rep;
  };
  auto fresh_seed = [&] {
    if (seed_source) return seed_source->next_u64();
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  };

  try {
    WireMessage first = t.receive();
    auto* hello = std::get_if<wire::Hello>(&first);
    if (!hello) return fail(wire::ErrorKind::kState, "expected Hello, got " + message_name(first));
    if (hello->version != kProtocolVersion) {
      return fail(wire::ErrorKind::kVersion, "protocol version " + std::to_string(hello->version) +
                                                 " not supported");
    }
    const Digest digest = config.family.digest();
    if (hello->family_id != static_cast<std::uint8_t>(config.family.id) ||
        hello->params_digest != digest) {
      return fail(wire::ErrorKind::kParams, "family or parameters differ from " +
                                                config.family.descriptor());
    }
    switch (config.seed_policy) {
      case SeedPolicy::kClient: rep.seed = hello->seed ? *hello->seed : fresh_seed(); break;
      case SeedPolicy::kFixed: rep.seed = config.fixed_seed; break;
      case SeedPolicy::kRandom: rep.seed = fresh_seed(); break;
    }
    wire::Hello reply;
    reply.params_digest = digest;
    reply.family_id = hello->family_id;
    reply.seed = rep.seed;
    t.send(reply);

    WireMessage key_msg = t.receive();
    auto* key = std::get_if<wire::PublicKey>(&key_msg);
    if (!key) return fail(wire::ErrorKind::kState, "expected PublicKey, got " + message_name(key_msg));
    std::shared_ptr<const PublicFunction> f;
    try {
      f = load_public_function(config.family.id, key->bytes);
    } catch (const Error& e) {
      return fail(wire::ErrorKind::kParams, std::string("bad public key: ") + e.what());
    }
    if (f->descriptor() != config.family.descriptor()) {
      return fail(wire::ErrorKind::kParams, "public key parameters differ from the hello");
    }
    rep.k_hash = k_hash_of(key->bytes);

    std::optional<ServerSession> session;
    try {
      session.emplace(f, config.backend, rep.seed);
    } catch (const Error& e) {
      return fail(wire::ErrorKind::kParams, e.what());
    }
    rep.y = session->prepare();
    t.send(wire::MeasuredY{rep.y});

    WireMessage next = t.receive();
    if (auto* res = std::get_if<wire::Result>(&next)) {
      rep.result = *res;
      rep.completed = true;
      return rep;
    }
    auto* instr = std::get_if<wire::MeasureInstruction>(&next);
    if (!instr) return fail(wire::ErrorKind::kState, "expected MeasureInstruction, got " + message_name(next));
    rep.alpha = instr->alphas;
    try {
      rep.b = session->measure(instr->alphas);
    } catch (const Error& e) {
      return fail(wire::ErrorKind::kState, e.what());
    }
    rep.output_qubit = session->output_qubit();
    t.send(wire::Outcomes{rep.b});

    WireMessage last = t.receive();
    auto* res = std::get_if<wire::Result>(&last);
    if (!res) return fail(wire::ErrorKind::kState, "expected Result, got " + message_name(last));
    rep.result = *res;
    rep.completed = true;
    return rep;
  } catch (const FrameError& e) {
    return fail(wire::ErrorKind::kFrame, e.what());
  } catch (const TransportClosed&) {
    return rep;
  } catch (const std::exception& e) {
    return fail(wire::ErrorKind::kInternal, e.what());
  }
}

Transcript run_honest(const FamilyConfig& config, Backend backend, std::uint64_t client_seed,
                      std::uint64_t server_seed) {
  auto [client_end, server_end] = make_in_process_pair();
  ServerConfig sc{config, backend, SeedPolicy::kClient, 0};
  ServerReport report;
  std::thread server([&, t = server_end.get()] { report = run_server(*t, sc); });
  Transcript tr;
  try {
    tr = run_client(*client_end, config, client_seed, server_seed);
  } catch (...) {
    client_end->close();
    server.join();
    throw;
  }
  server.join();
  if (auto* r = std::get_if<QubitAngle>(&tr.outcome); r && report.output_qubit) {
    tr.fidelity = fidelity(*report.output_qubit, *r);
  }
  return tr;
}

std::pair<std::uint64_t, std::uint64_t> run_seeds(std::uint64_t seed, std::uint64_t run) {
  return {derive_seed(seed, 2 * run), derive_seed(seed, 2 * run + 1)};
}

std::vector<Transcript> run_batch(const FamilyConfig& config, Backend backend, std::uint64_t runs,
                                  std::uint64_t seed) {
  config.validate();
  std::vector<Transcript> out(runs);
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(runs);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      auto [cs, ss] = run_seeds(seed, static_cast<std::uint64_t>(i));
      out[i] = run_honest(config, backend, cs, ss);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace qfactory
