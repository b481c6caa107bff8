#include "qfactory/stats.hpp"

#include <algorithm>

#include <boost/math/distributions/chi_squared.hpp>

#include "qfactory/error.hpp"

namespace qfactory {

ChiSquared chi_squared_uniform(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two bins");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  ChiSquared out;
  out.dof = static_cast<int>(counts.size()) - 1;
  if (total == 0) return out;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    out.statistic += d * d / expected;
  }
  boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

double TranscriptStats::abort_rate() const {
  return runs == 0 ? 0.0 : static_cast<double>(aborts) / static_cast<double>(runs);
}

double TranscriptStats::two_preimage_rate() const {
  return runs == 0 ? 0.0
                   : static_cast<double>(runs - single_preimage_aborts) / static_cast<double>(runs);
}

nlohmann::json TranscriptStats::to_json() const {
  nlohmann::json j;
  j["runs"] = runs;
  j["theta_histogram"] = theta_histogram;
  j["theta_chi2"] = {{"statistic", theta_chi2.statistic}, {"dof", theta_chi2.dof},
                     {"p_value", theta_chi2.p_value}};
  j["aborts"] = aborts;
  j["abort_rate"] = abort_rate();
  j["two_preimage_rate"] = two_preimage_rate();
  if (fidelity_count > 0) {
    j["fidelity"] = {{"count", fidelity_count}, {"min", fidelity_min}, {"mean", fidelity_mean}};
  }
  return j;
}

TranscriptStats compute_stats(const std::vector<Transcript>& transcripts) {
  TranscriptStats s;
  double fid_sum = 0;
  for (const auto& t : transcripts) {
    ++s.runs;
    if (auto* r = std::get_if<QubitAngle>(&t.outcome)) {
      if (r->r < 0 || r->r > 7) throw Error(ErrorCode::kParse, "theta_r out of range");
      ++s.theta_histogram[r->r];
    } else {
      ++s.aborts;
      if (std::get<Abort>(t.outcome).reason == "no second preimage") ++s.single_preimage_aborts;
    }
    if (t.fidelity) {
      ++s.fidelity_count;
      fid_sum += *t.fidelity;
      s.fidelity_min = std::min(s.fidelity_min, *t.fidelity);
    }
  }
  s.theta_chi2 = chi_squared_uniform(s.theta_histogram);
  if (s.fidelity_count > 0) s.fidelity_mean = fid_sum / static_cast<double>(s.fidelity_count);
  return s;
}

}  // namespace qfactory
