#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfactory/protocol.hpp"

namespace qfactory {

struct ChiSquared {
  double statistic = 0;
  double p_value = 1;
  int dof = 0;
};

// Pearson test of the counts against the uniform distribution.
ChiSquared chi_squared_uniform(std::span<const std::uint64_t> counts);

struct TranscriptStats {
  std::uint64_t runs = 0;
  std::array<std::uint64_t, 8> theta_histogram{};
  std::uint64_t aborts = 0;
  std::uint64_t single_preimage_aborts = 0;
  ChiSquared theta_chi2;
  std::uint64_t fidelity_count = 0;
  double fidelity_min = 1;
  double fidelity_mean = 0;

  double abort_rate() const;
  // Fraction of runs whose image had two preimages.
  double two_preimage_rate() const;
  nlohmann::json to_json() const;
};

TranscriptStats compute_stats(const std::vector<Transcript>& transcripts);

}  // namespace qfactory
