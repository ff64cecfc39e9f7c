#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpath/paths.hpp"

namespace mpath {

/// Flattened link lists of a pair's candidate M-path sets, laid out for the
/// scoring kernels.
struct CandidateTable {
  std::vector<std::uint32_t> offsets;  // size = candidates + 1
  std::vector<NodePair> links;
  std::vector<int> hops;

  static CandidateTable build(std::span<const MPathSet> sets);
  std::size_t size() const { return hops.size(); }
};

struct CandidateScore {
  /// set_deficiency of the candidate.
  Rate deficiency;
  /// Smallest current effective rate among the candidate's links.
  Rate min_link_rate;

  bool operator==(const CandidateScore&) const = default;
};

/// Reference implementation; one pass per candidate.
void score_candidates_serial(const CandidateTable& table, const DeficiencyView& d,
                             std::span<CandidateScore> out);
/// OpenMP version of score_candidates_serial; identical results.
void score_candidates_parallel(const CandidateTable& table, const DeficiencyView& d,
                               std::span<CandidateScore> out);

/// max over i < j of T_ij - R_eff_ij.
Rate cost_delta_serial(const TargetMatrix& t, const EffectiveRateMatrix& eff);
Rate cost_delta_parallel(const TargetMatrix& t, const EffectiveRateMatrix& eff);

}  // namespace mpath
