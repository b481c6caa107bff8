// Runs the eight acceptance criteria and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "qfactory/hardcore.hpp"
#include "qfactory/mp12.hpp"
#include "qfactory/params.hpp"
#include "qfactory/protocol.hpp"
#include "qfactory/reg2.hpp"
#include "qfactory/regularity.hpp"
#include "qfactory/stats.hpp"

using namespace qfactory;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail << "failed: " << what << "; ";
    }
  }
};

using Clock = std::chrono::steady_clock;

int direct_mod8(const std::vector<int>& z, const std::vector<int>& a, const BitString& b) {
  int sum = 0;
  for (std::size_t i = 0; i < z.size(); ++i) sum += z[i] * (4 * b[i] + a[i]);
  return ((sum % 8) + 8) % 8;
}

bool bits_match(const std::vector<int>& z, const std::vector<int>& a, const BitString& b) {
  auto bits = hardcore_bits(HardcoreInputs::from_vectors(z, a, b));
  return 4 * bits[0] + 2 * bits[1] + bits[2] == direct_mod8(z, a, b);
}

void criterion1(Outcome& o) {
  std::uint64_t runs_checked = 0;
  double worst = 1.0;
  for (auto id : {FamilyId::kToyLinear, FamilyId::kToyPerm}) {
    for (std::uint64_t n = 4; n <= 12; ++n) {
      FamilyConfig cfg{.id = id, .n = n};
      const std::uint64_t seed = 1000 * static_cast<std::uint64_t>(id) + n;
      auto sv = run_batch(cfg, Backend::kStateVector, 1000, seed);
      auto an = run_batch(cfg, Backend::kAnalytic, 1000, seed);
      for (std::size_t i = 0; i < sv.size(); ++i) {
        const auto& s = sv[i];
        const auto& a = an[i];
        o.require(std::holds_alternative<QubitAngle>(s.outcome), "toy run aborted");
        o.require(s.fidelity.has_value(), "missing fidelity");
        if (s.fidelity) worst = std::min(worst, *s.fidelity);
        o.require(s.fidelity && *s.fidelity >= 1.0 - 1e-9, "fidelity below 1 - 1e-9");
        o.require(s.b == a.b, "analytic b differs under matched seeds");
        o.require(s.outcome == a.outcome, "analytic r differs under matched seeds");
        ++runs_checked;
      }
    }
  }
  o.detail << runs_checked << " runs, min fidelity " << std::setprecision(15) << worst;
}

void criterion2(Outcome& o) {
  std::uint64_t exhaustive = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t zc = 1, ac = 1;
    for (std::size_t i = 0; i < n; ++i) {
      zc *= 3;
      ac *= 8;
    }
    std::vector<int> z(n), a(n);
    BitString b(n);
    for (std::size_t zi = 0; zi < zc; ++zi) {
      for (std::size_t i = 0, v = zi; i < n; ++i, v /= 3) z[i] = static_cast<int>(v % 3) - 1;
      for (std::size_t ai = 0; ai < ac; ++ai) {
        for (std::size_t i = 0, v = ai; i < n; ++i, v /= 8) a[i] = static_cast<int>(v % 8);
        for (std::size_t bi = 0; bi < (std::size_t{1} << n); ++bi) {
          for (std::size_t i = 0; i < n; ++i) b[i] = (bi >> i) & 1;
          o.require(bits_match(z, a, b), "exhaustive decomposition");
          ++exhaustive;
        }
      }
    }
  }
  Rng rng(2002);
  for (int t = 0; t < 100000; ++t) {
    const std::size_t n = 1 + rng.uniform_int(0, 31);
    std::vector<int> z(n), a(n);
    BitString b(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = static_cast<int>(rng.uniform_int(0, 2)) - 1;
      a[i] = static_cast<int>(rng.uniform_int(0, 7));
      b[i] = static_cast<std::uint8_t>(rng.bit());
    }
    o.require(bits_match(z, a, b), "random decomposition");
  }
  auto dec = verify_decomposition(100000, 32, 2003, 4);
  auto ids = verify_identities(100000, 2004);
  o.require(dec.ok(), "library decomposition suite");
  o.require(ids.ok(), "identities I1-I7");
  o.detail << exhaustive << " exhaustive + 100000 random; suite " << dec.decomposition_checks
           << " decomposition / " << ids.identity_checks << " identity checks, "
           << dec.counterexamples.size() + ids.counterexamples.size() << " counterexamples";
}

int lwe_round_trips(std::uint64_t n, int trials, std::uint64_t seed) {
  LweParams p = gen_params(n);
  Rng rng(seed);
  auto [key, td] = lwe_gen(p, rng);
  int ok = 0;
  for (int t = 0; t < trials; ++t) {
    ZqVector s = sample_uniform_vector(p.n, p.modulus(), rng);
    SignedVector e = sample_bounded_vector(p.m(), static_cast<std::int64_t>(p.mu), rng);
    auto got = lwe_inv(key, td, lwe_eval(key, s, e));
    ok += got && got->s == s && got->e == e;
  }
  return ok;
}

void criterion3(Outcome& o) {
  const int ok8 = lwe_round_trips(8, 1000, 3003);
  const int ok16 = lwe_round_trips(16, 50, 3016);
  o.require(ok8 == 1000, "n=8 round trip");
  o.require(ok16 == 50, "n=16 spot check");
  o.detail << "n=8 " << ok8 << "/1000, n=16 " << ok16 << "/50";
}

void criterion4(Outcome& o) {
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 4; n <= 512; n *= 2) ns.push_back(n);
  Rng rng(4004);
  for (int i = 0; i < 20; ++i) ns.push_back(rng.uniform_int(4, 512));
  for (auto n : ns) {
    auto v = check_constraints(gen_params(n));
    if (!v.empty()) {
      o.require(false, "n=" + std::to_string(n) + " condition " + std::to_string(v.front().index));
    }
  }
  o.detail << ns.size() << " values of n";
}

void criterion5(Outcome& o) {
  const double exact = domain_addition_probability(1, 2, 1);
  o.require(exact == 0.875, "closed form at (1, 2, 1) is not 0.875");
  auto mc1 = monte_carlo_domain_addition(1, 2, 1, 100000, 5005);
  const double se1 = std::sqrt(exact * (1 - exact) / 100000);
  o.require(std::fabs(mc1.fraction - exact) <= 3 * se1, "Monte Carlo at m=1");

  LweParams p = gen_params(8);
  const double mu = static_cast<double>(p.mu);
  const double mu_prime = mu / static_cast<double>(p.m());
  const double closed = domain_addition_probability(p.m(), mu, mu_prime);
  auto mc2 = monte_carlo_domain_addition(p.m(), mu, mu_prime, 100000, 5006);
  const double se2 = std::sqrt(closed * (1 - closed) / 100000);
  o.require(std::fabs(mc2.fraction - closed) <= 3 * se2, "Monte Carlo at m=304");
  o.detail << std::setprecision(6) << "m=1: " << mc1.fraction << " vs 0.875; m=304: "
           << mc2.fraction << " vs " << closed;
}

void criterion6(Outcome& o) {
  LweParams p = gen_params(8);
  const double closed = domain_addition_probability(p.m(), static_cast<double>(p.mu),
                                                    static_cast<double>(p.mu_prime()));
  auto d = estimate_delta(p, 2000, 6006);
  o.require(d.point >= closed - 5 * d.standard_error, "delta below the domain-addition floor");
  o.require(d.claw_violations == 0, "library claw checks");
  o.require(d.failures == 0, "inversion failures");

  // Independent claw checks on fresh keys.
  std::uint64_t claws = 0, trials = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    Rng rng(6100 + k);
    auto [key, td] = reg2_gen(p, rng);
    for (int t = 0; t < 100; ++t, ++trials) {
      Preimage x = sample_reg2_domain(p, rng);
      ZqVector y = reg2_eval(key, x);
      auto inv = reg2_inv(key, td, y);
      if (auto* two = std::get_if<TwoPreimages>(&inv)) {
        ++claws;
        o.require(reg2_eval(key, two->first) == y && reg2_eval(key, two->second) == y,
                  "claw does not re-evaluate to y");
        o.require(two->first.c != two->second.c, "claw c-bits agree");
        o.require(two->first.s - two->second.s == td.s0, "s difference is not s0");
        o.require(two->first.e - two->second.e == td.e0, "e difference is not e0");
      } else {
        o.require(std::holds_alternative<NoSecondPreimage>(inv), "inversion failed on an image");
      }
    }
  }
  o.detail << std::setprecision(5) << "delta " << d.point << " (SE " << d.standard_error
           << ", floor " << closed << "); independent claws " << claws << "/" << trials;
}

void criterion7(Outcome& o) {
  auto runs = run_batch(FamilyConfig{.id = FamilyId::kToyLinear, .n = 8}, Backend::kStateVector,
                        8000, 7007);
  auto st = compute_stats(runs);
  o.require(st.aborts == 0, "toy runs aborted");
  o.require(st.theta_chi2.p_value > 0.001, "theta histogram not uniform");

  FamilyConfig degenerate{.id = FamilyId::kToyPerm, .n = 8, .toy_perm_same_keys = true};
  std::uint64_t zero = 0;
  auto deg_sv = run_batch(degenerate, Backend::kStateVector, 1000, 7008);
  auto deg_an = run_batch(degenerate, Backend::kAnalytic, 1000, 7008);
  for (const auto* set : {&deg_sv, &deg_an}) {
    for (const auto& t : *set) {
      auto* r = std::get_if<QubitAngle>(&t.outcome);
      zero += r && r->r == 0;
      if (t.fidelity) o.require(*t.fidelity >= 1 - 1e-9, "degenerate run fidelity");
    }
  }
  o.require(zero == 2000, "degenerate claw gave r != 0");
  o.detail << std::setprecision(4) << "chi2 " << st.theta_chi2.statistic << " p="
           << st.theta_chi2.p_value << "; degenerate r=0 in " << zero << "/2000";
}

void criterion8(Outcome& o) {
  FamilyConfig cfg{.id = FamilyId::kReg2, .n = 8};
  const int sessions = 3;
  TcpServer server("127.0.0.1", 0);
  std::thread th([&] {
    server.run([&](Transport& t) { run_server(t, ServerConfig{.family = cfg}); }, sessions);
  });

  int identical = 0, completed = 0;
  std::size_t leaked = 0;
  for (int i = 0; i < sessions; ++i) {
    auto [cs, ss] = run_seeds(8008, static_cast<std::uint64_t>(i));
    std::string tcp_line;
    std::vector<std::vector<std::uint8_t>> frames;
    try {
      auto tcp = tcp_connect("127.0.0.1", server.port());
      RecordingTransport rec(*tcp);
      Transcript t = run_client(rec, cfg, cs, ss);
      tcp->close();
      tcp_line = t.to_line();
      frames = rec.frames();
      completed += std::holds_alternative<QubitAngle>(t.outcome);
    } catch (const std::exception& e) {
      o.require(false, std::string("tcp session: ") + e.what());
      continue;
    }
    identical += tcp_line == run_honest(cfg, Backend::kAnalytic, cs, ss).to_line();

    const std::size_t w = 32;
    std::unordered_set<std::string> windows;
    for (const auto& f : frames) {
      for (std::size_t j = 0; j + w <= f.size(); ++j) windows.emplace(f.begin() + j, f.begin() + j + w);
    }
    Bytes td = ClientSession(cfg, cs).trapdoor_bytes();
    // Skip the parameter header, which the public key file shares.
    for (std::size_t j = 4 + 2 + 5 * 8; j + w <= td.size(); ++j) {
      leaked += windows.count(std::string(td.begin() + j, td.begin() + j + w));
    }
  }
  th.join();
  o.require(identical == sessions, "TCP transcript differs from in-process");
  o.require(completed >= 1, "no session produced an angle");
  o.require(leaked == 0, "trapdoor bytes on the wire");
  o.detail << identical << "/" << sessions << " byte-identical, " << completed
           << " with theta, " << leaked << " trapdoor windows on the wire";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime target
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {1, "state-vector vs analytic oracle equivalence", 60, criterion1},
      {2, "hard-core decomposition and identities", 30, criterion2},
      {3, "LWE trapdoor round trip", 120, criterion3},
      {4, "parameter constraints for n in [4, 512]", 10, criterion4},
      {5, "domain addition Monte Carlo", 0, criterion5},
      {6, "delta-2 regularity at n=8", 0, criterion6},
      {7, "theta uniformity and degenerate claw", 0, criterion7},
      {8, "TCP loopback transcript and trapdoor confinement", 0, criterion8},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.require(false, "runtime " + std::to_string(secs) + " s over " + std::to_string(c.budget_s));
    }
    failures += !o.pass;
    std::printf("[%s] criterion %d: %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
