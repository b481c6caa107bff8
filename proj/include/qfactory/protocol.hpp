#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfactory/family.hpp"
#include "qfactory/quantum.hpp"
#include "qfactory/rng.hpp"
#include "qfactory/transport.hpp"

namespace qfactory {

enum class Backend { kAnalytic, kStateVector };

std::string backend_name(Backend b);
Backend parse_backend(const std::string& name);

struct Abort {
  std::string reason;
  bool operator==(const Abort&) const = default;
};

using ThetaOutcome = std::variant<QubitAngle, Abort>;

// Client's angle from a claw: Abort when the final bits agree.
ThetaOutcome client_theta(const BitString& x, const BitString& xp, const std::vector<int>& alphas,
                          const BitString& b);

class ClientSession {
 public:
  enum class Phase { kAwaitY, kAwaitB, kDone, kAborted };

  // Generates the key pair and samples alpha from the client stream.
  ClientSession(const FamilyConfig& config, std::uint64_t seed);

  Phase phase() const { return phase_; }
  const FamilyConfig& config() const { return config_; }
  const PublicFunction& public_function() const { return *keys_.pub; }
  Bytes public_key_bytes() const { return keys_.pub->serialize(); }
  const std::vector<int>& alphas() const { return alphas_; }

  // Inverts y. Returns the measurement instruction, or Abort.
  std::variant<std::vector<int>, Abort> on_y(const Bytes& y);
  ThetaOutcome on_b(const BitString& b);

  const std::optional<Claw>& claw() const { return claw_; }
  const std::optional<ThetaOutcome>& outcome() const { return outcome_; }
  // For leak checks only.
  Bytes trapdoor_bytes() const { return keys_.secret->serialize_trapdoor(); }

 private:
  FamilyConfig config_;
  Rng rng_;
  KeyPair keys_;
  std::vector<int> alphas_;
  Phase phase_ = Phase::kAwaitY;
  std::optional<Claw> claw_;
  std::optional<ThetaOutcome> outcome_;
};

// Holds the public function and a measurement device; no trapdoor type is
// reachable from here.
class ServerSession {
 public:
  enum class Phase { kPrepare, kAwaitInstruction, kDone };

  ServerSession(std::shared_ptr<const PublicFunction> f, Backend backend, std::uint64_t seed);

  Phase phase() const { return phase_; }
  // Stage 1: sample x, publish y = f(x). The state-vector device also builds
  // the uniform superposition over every preimage of y.
  Bytes prepare();
  // Stage 2: measure every qubit but the last.
  BitString measure(const std::vector<int>& alphas);
  // State-vector device only, after measure().
  const std::optional<std::array<Complex, 2>>& output_qubit() const { return output_; }

 private:
  std::shared_ptr<const PublicFunction> f_;
  Backend backend_;
  Rng rng_;
  Phase phase_ = Phase::kPrepare;
  std::optional<StateVector> state_;
  std::optional<std::array<Complex, 2>> output_;
};

static_assert(!std::is_constructible_v<ServerSession, std::unique_ptr<SecretFunction>, Backend,
                                       std::uint64_t>);

struct Transcript {
  static constexpr int kVersion = 1;

  std::string family;
  std::uint64_t n = 0;
  std::string k_hash;  // sha256 hex of the public key bytes
  std::vector<int> alpha;
  Bytes y;
  BitString b;
  ThetaOutcome outcome = Abort{"incomplete"};
  std::uint64_t client_seed = 0;
  std::uint64_t server_seed = 0;
  std::optional<double> fidelity;

  nlohmann::json to_json() const;
  // Single line, no trailing newline.
  std::string to_line() const;
  static Transcript from_json(const nlohmann::json& j);
};

// Server seed selection for incoming sessions.
enum class SeedPolicy { kClient, kFixed, kRandom };
SeedPolicy parse_seed_policy(const std::string& s);

struct ServerConfig {
  FamilyConfig family;
  Backend backend = Backend::kAnalytic;
  SeedPolicy seed_policy = SeedPolicy::kClient;
  std::uint64_t fixed_seed = 0;
};

// Server-side view of one session.
struct ServerReport {
  bool completed = false;
  std::optional<wire::ErrorMsg> error_sent;
  std::uint64_t seed = 0;
  std::string k_hash;
  Bytes y;
  std::vector<int> alpha;
  BitString b;
  std::optional<wire::Result> result;
  std::optional<std::array<Complex, 2>> output_qubit;

  nlohmann::json to_json() const;
};

// Raised on the client when the server answers with an Error message.
class RemoteError : public Error {
 public:
  explicit RemoteError(const wire::ErrorMsg& m)
      : Error(ErrorCode::kProtocol, std::string(error_kind_name(m.code)) + ": " + m.detail),
        msg(m) {}
  wire::ErrorMsg msg;
};

// One client session over any transport.
Transcript run_client(Transport& t, const FamilyConfig& config, std::uint64_t client_seed,
                      std::optional<std::uint64_t> requested_server_seed);

// One server session over any transport. Protocol faults are answered with an
// Error message and reported, not thrown.
ServerReport run_server(Transport& t, const ServerConfig& config, Rng* seed_source = nullptr);

// In-process honest run through a serialized channel. With the state-vector
// backend the transcript also records the output-qubit fidelity.
Transcript run_honest(const FamilyConfig& config, Backend backend, std::uint64_t client_seed,
                      std::uint64_t server_seed);

// Per-run seeds for batch runs.
std::pair<std::uint64_t, std::uint64_t> run_seeds(std::uint64_t seed, std::uint64_t run);

// `runs` independent honest runs, seeded by run_seeds(seed, i), in run order.
std::vector<Transcript> run_batch(const FamilyConfig& config, Backend backend, std::uint64_t runs,
                                  std::uint64_t seed);

}  // namespace qfactory
