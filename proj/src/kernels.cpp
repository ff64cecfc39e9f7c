#include "mpath/kernels.hpp"

#include <algorithm>
#include <limits>

namespace mpath {

CandidateTable CandidateTable::build(std::span<const MPathSet> sets) {
  CandidateTable t;
  t.offsets.reserve(sets.size() + 1);
  t.offsets.push_back(0);
  for (const auto& s : sets) {
    for (const auto& l : s.links()) t.links.push_back(l);
    t.offsets.push_back(static_cast<std::uint32_t>(t.links.size()));
    t.hops.push_back(s.total_hops());
  }
  return t;
}

namespace {

inline CandidateScore score_one(const CandidateTable& table, const DeficiencyView& d, std::size_t c) {
  Rate worst{std::numeric_limits<std::int64_t>::min()};
  Rate weakest{std::numeric_limits<std::int64_t>::max()};
  for (std::uint32_t k = table.offsets[c]; k < table.offsets[c + 1]; ++k) {
    const auto [i, j] = table.links[k];
    worst = std::max(worst, d(i, j));
    weakest = std::min(weakest, (*d.effective)(i, j));
  }
  return {worst, weakest};
}

}  // namespace

void score_candidates_serial(const CandidateTable& table, const DeficiencyView& d,
                             std::span<CandidateScore> out) {
  for (std::size_t c = 0; c < table.size(); ++c) out[c] = score_one(table, d, c);
}

void score_candidates_parallel(const CandidateTable& table, const DeficiencyView& d,
                               std::span<CandidateScore> out) {
  const auto n = static_cast<std::int64_t>(table.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < n; ++c) {
    out[static_cast<std::size_t>(c)] = score_one(table, d, static_cast<std::size_t>(c));
  }
}

Rate cost_delta_serial(const TargetMatrix& t, const EffectiveRateMatrix& eff) {
  std::int64_t worst = std::numeric_limits<std::int64_t>::min();
  for (NodeId i = 0; i < t.size(); ++i) {
    for (NodeId j = i + 1; j < t.size(); ++j) {
      worst = std::max(worst, (t(i, j) - eff(i, j)).units());
    }
  }
  return Rate(worst);
}

Rate cost_delta_parallel(const TargetMatrix& t, const EffectiveRateMatrix& eff) {
  std::int64_t worst = std::numeric_limits<std::int64_t>::min();
  const int n = t.size();
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      worst = std::max(worst, (t(i, j) - eff(i, j)).units());
    }
  }
  return Rate(worst);
}

}  // namespace mpath
