#include "qfactory/quantum.hpp"

#include <cmath>

#include "qfactory/error.hpp"

namespace qfactory {

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error(ErrorCode::kSizeLimit,
                "state vector supports 1.." + std::to_string(kMaxQubits) + " qubits");
  }
  amps_.assign(std::size_t{1} << n_qubits, Complex(0.0, 0.0));
  amps_[0] = 1.0;
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

std::size_t basis_index(const BitString& x) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1) throw Error(ErrorCode::kInvalidArgument, "not a bit string");
    idx |= static_cast<std::size_t>(x[i]) << i;
  }
  return idx;
}

StateVector sv_prepare_superposition(const std::vector<BitString>& xs) {
  if (xs.empty()) throw Error(ErrorCode::kInvalidArgument, "empty superposition");
  const std::size_t n = xs.front().size();
  if (n > static_cast<std::size_t>(StateVector::kMaxQubits)) {
    throw Error(ErrorCode::kSizeLimit, "too many qubits for the state vector");
  }
  StateVector sv(static_cast<int>(n));
  auto amps = sv.mutable_amplitudes();
  amps[0] = 0.0;
  const double a = 1.0 / std::sqrt(static_cast<double>(xs.size()));
  for (const auto& x : xs) {
    if (x.size() != n) throw Error(ErrorCode::kDimensionMismatch, "basis states differ in length");
    auto idx = basis_index(x);
    if (amps[idx] != Complex(0.0, 0.0)) throw Error(ErrorCode::kInvalidArgument, "repeated basis state");
    amps[idx] = a;
  }
  return sv;
}

StateVector sv_prepare_claw(const BitString& x, const BitString& xp) {
  if (x.size() != xp.size()) throw Error(ErrorCode::kDimensionMismatch, "claw halves differ in length");
  if (x == xp) throw Error(ErrorCode::kInvalidArgument, "claw needs x != x'");
  return sv_prepare_superposition({x, xp});
}

int sv_measure_equatorial(StateVector& state, int qubit, int alpha, Rng& rng) {
  if (qubit < 0 || qubit >= state.n_qubits()) {
    throw Error(ErrorCode::kInvalidArgument, "qubit out of range");
  }
  if (alpha < 0 || alpha > 7) throw Error(ErrorCode::kInvalidArgument, "alpha must be in 0..7");
  const double p0 = kernels::equatorial_p0(state.amplitudes(), qubit, alpha);
  const int b = rng.uniform01() < p0 ? 0 : 1;
  const double p_b = b == 0 ? p0 : 1.0 - p0;
  if (!(p_b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sampled a zero-probability outcome");
  kernels::equatorial_collapse(state.mutable_amplitudes(), qubit, alpha, b, p_b);
  return b;
}

StageTwoResult sv_run_stage2(StateVector state, const std::vector<int>& alphas, Rng& rng) {
  const int n = state.n_qubits();
  if (static_cast<int>(alphas.size()) != n - 1) {
    throw Error(ErrorCode::kDimensionMismatch, "need one alpha per non-output qubit");
  }
  StageTwoResult out;
  out.b.resize(alphas.size());
  for (int i = 0; i < n - 1; ++i) {
    out.b[i] = static_cast<std::uint8_t>(sv_measure_equatorial(state, i, alphas[i], rng));
  }
  // Every other qubit is now an equatorial product state with nonzero |0>
  // amplitude, so the output qubit is read off indices 0 and 2^{n-1}.
  auto amps = state.amplitudes();
  Complex a0 = amps[0];
  Complex a1 = amps[std::size_t{1} << (n - 1)];
  double len = std::sqrt(std::norm(a0) + std::norm(a1));
  out.output = {a0 / len, a1 / len};
  return out;
}

void TwoBranchState::apply_measurement(int qubit, int alpha, int b) {
  const int t = alpha + 4 * b;
  phase = ((phase + (static_cast<int>(x.at(qubit)) - static_cast<int>(xp.at(qubit))) * t) % 8 + 8) % 8;
}

double TwoBranchState::p0(int qubit, int alpha) const {
  const std::size_t q = static_cast<std::size_t>(qubit);
  if (x.at(q) == xp.at(q)) return 0.5;
  for (std::size_t j = q + 1; j < x.size(); ++j) {
    if (x[j] != xp[j]) return 0.5;
  }
  // Single qubit (|x_q> + e^{i phase pi/4}|x'_q>)/sqrt(2) against
  // (|0> + e^{i alpha pi/4}|1>)/sqrt(2).
  auto bra = [&](int bit) { return bit ? std::polar(1.0, -alpha * M_PI / 4) : Complex(1.0); };
  Complex amp = bra(x[q]) + std::polar(1.0, phase * M_PI / 4) * bra(xp[q]);
  return std::norm(amp) / 4;
}

std::variant<QubitAngle, FixedOutput> TwoBranchState::output() const {
  const int xn = x.back();
  if (xn == xp.back()) return FixedOutput{xn};
  return QubitAngle{xn == 0 ? phase : (8 - phase) % 8};
}

AnalyticResult analytic_run_stage2(const BitString& x, const BitString& xp,
                                   const std::vector<int>& alphas, Rng& rng) {
  if (x.size() != xp.size() || x.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "claw halves differ in length");
  }
  if (x == xp) throw Error(ErrorCode::kInvalidArgument, "claw needs x != x'");
  if (alphas.size() != x.size() - 1) {
    throw Error(ErrorCode::kDimensionMismatch, "need one alpha per non-output qubit");
  }
  TwoBranchState st{x, xp, 0};
  AnalyticResult out;
  out.b.resize(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    int b = rng.uniform01() < st.p0(static_cast<int>(i), alphas[i]) ? 0 : 1;
    out.b[i] = static_cast<std::uint8_t>(b);
    st.apply_measurement(static_cast<int>(i), alphas[i], b);
  }
  out.output = st.output();
  return out;
}

int theta_r(const BitString& x, const BitString& xp, const std::vector<int>& alphas,
            const BitString& b) {
  if (x.size() != xp.size() || x.empty() || alphas.size() != x.size() - 1 ||
      b.size() != alphas.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "theta inputs have inconsistent lengths");
  }
  long long sum = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    sum += (static_cast<long long>(x[i]) - xp[i]) * (4LL * b[i] + alphas[i]);
  }
  if (x.back() == 1) sum = -sum;
  return static_cast<int>(((sum % 8) + 8) % 8);
}

double fidelity(const std::array<Complex, 2>& a, QubitAngle angle) {
  Complex overlap = a[0] + std::conj(kernels::octant_phase(angle.r)) * a[1];
  return std::norm(overlap) / 2.0;
}

}  // namespace qfactory
