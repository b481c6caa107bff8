#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "qfactory/kernels.hpp"
#include "qfactory/rng.hpp"
#include "qfactory/zq.hpp"

namespace qfactory {

using Complex = std::complex<double>;

// |+_{r pi/4}> = (|0> + e^{i r pi/4}|1>)/sqrt(2), r in 0..7.
struct QubitAngle {
  int r = 0;
  bool operator==(const QubitAngle&) const = default;
};

// Output qubit is a computational basis state: the abort condition.
struct FixedOutput {
  int bit = 0;
  bool operator==(const FixedOutput&) const = default;
};

// Qubit i is bit i of the amplitude index and position i of a BitString.
class StateVector {
 public:
  static constexpr int kMaxQubits = 14;

  explicit StateVector(int n_qubits);

  int n_qubits() const { return n_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> mutable_amplitudes() { return amps_; }
  double norm() const;

 private:
  int n_;
  std::vector<Complex> amps_;
};

std::size_t basis_index(const BitString& x);

// (|x> + |x'>)/sqrt(2).
StateVector sv_prepare_claw(const BitString& x, const BitString& xp);
// Equal superposition of distinct basis states (one or more).
StateVector sv_prepare_superposition(const std::vector<BitString>& xs);

// Samples b with the Born rule (u < p0 gives 0, u one uniform01 draw) and
// collapses the qubit onto (|0> + (-1)^b e^{i alpha pi/4}|1>)/sqrt(2).
int sv_measure_equatorial(StateVector& state, int qubit, int alpha, Rng& rng);

struct StageTwoResult {
  BitString b;
  std::array<Complex, 2> output;  // normalised state of the last qubit
};

// Measures qubits 0..n-2 in order; alphas.size() must equal n - 1.
StageTwoResult sv_run_stage2(StateVector state, const std::vector<int>& alphas, Rng& rng);

// (|x> + e^{i phase pi/4}|x'>)/sqrt(2); positions where x and x' agree are
// product qubits.
struct TwoBranchState {
  BitString x;
  BitString xp;
  int phase = 0;

  // Applies the projection for outcome b on `qubit` (phase bookkeeping only).
  void apply_measurement(int qubit, int alpha, int b);
  // Born probability of outcome 0 for an unmeasured qubit. It is 1/2 unless
  // the branches differ at `qubit` and nowhere after it.
  double p0(int qubit, int alpha) const;
  std::variant<QubitAngle, FixedOutput> output() const;
};

struct AnalyticResult {
  BitString b;
  std::variant<QubitAngle, FixedOutput> output;
};

// Same outcome draws as the state-vector engine on a claw: b = (u < p0 ? 0 : 1),
// and p0 = 1/2 whenever the claw differs in its last bit.
AnalyticResult analytic_run_stage2(const BitString& x, const BitString& xp,
                                   const std::vector<int>& alphas, Rng& rng);

// r = (-1)^{x_n} sum_{i<n} (x_i - x'_i)(4 b_i + alpha_i) mod 8.
int theta_r(const BitString& x, const BitString& xp, const std::vector<int>& alphas,
            const BitString& b);

// |<+_{r pi/4}|a>|^2.
double fidelity(const std::array<Complex, 2>& a, QubitAngle angle);

}  // namespace qfactory
