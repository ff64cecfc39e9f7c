#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpath/config.hpp"
#include "mpath/kernels.hpp"
#include "mpath/network.hpp"
#include "mpath/paths.hpp"
#include "mpath/rng.hpp"

namespace mpath {

enum class StopReason { converged, r_max, direct_pair_worst, cost_worsened, no_m_set, guard_exhausted };

std::string to_string(StopReason r);

/// Run precondition failed (degree < M, disconnected graph, bad config).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// apply_increment under strict_guard found a link with R_eff < delta_r.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TieKind { pair, set };

/// Source of the algorithm's random choices. pick(kind, n) returns an
/// index in [0, n) into the tied candidates listed in canonical order.
class TieBreaker {
 public:
  virtual ~TieBreaker() = default;
  virtual std::size_t pick(TieKind kind, std::size_t n) = 0;
};

/// Seeded choices: exactly one draw per tie with n > 1, none otherwise.
class RandomTieBreaker final : public TieBreaker {
 public:
  explicit RandomTieBreaker(std::uint64_t seed) : rng_(seed) {}
  std::size_t pick(TieKind, std::size_t n) override { return n <= 1 ? 0 : rng_.uniform_index(n); }

 private:
  Rng rng_;
};

struct RoutingRecord {
  MPathSet set;
  Rate rate;

  bool operator==(const RoutingRecord&) const = default;
};

/// (M-path set : rate) records, one per distinct set, iterated in canonical
/// set order.
class RoutingList {
 public:
  /// Adds `rate` to the record of `set`, creating it if needed.
  void add(const MPathSet& set, Rate rate);

  const std::map<MPathSet, Rate>& records() const { return records_; }
  std::vector<RoutingRecord> to_vector() const;
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  /// Sum of record rates with endpoints `pair`.
  Rate routed(NodePair pair) const;
  /// Sum of all record rates.
  Rate total() const;

  bool operator==(const RoutingList&) const = default;

 private:
  std::map<MPathSet, Rate> records_;
};

struct CandidateEntry {
  MPathSet set;
  Rate deficiency;
  bool guarded_out = false;
};

/// One pass through the main loop.
struct IterationTrace {
  std::int64_t r = 0;
  NodePair selected_pair;
  std::size_t pairs_tied = 0;
  /// Survivors of the deficiency and distance filters the set was drawn from.
  std::size_t candidates_tied = 0;
  std::optional<MPathSet> chosen_set;
  Rate delta_before;
  Rate delta_after;
  bool accepted = false;
  std::optional<StopReason> stop_reason;
  /// Populated only with RouterConfig::record_candidates.
  std::vector<CandidateEntry> candidates;
};

struct RoutingOutcome {
  RoutingList routing_list;
  EffectiveRateMatrix effective;
  std::vector<IterationTrace> trace;
  Rate final_delta;
  std::int64_t iterations = 0;
  StopReason stop_reason = StopReason::converged;
};

/// Network-wide cost: max over pairs of T_ij - R_eff_ij.
Rate cost_delta(const TargetMatrix& t, const EffectiveRateMatrix& eff);

/// Uniform choice among the pairs attaining max D. `tied`, if given,
/// receives the number of maximisers.
NodePair select_worst_pair(const DeficiencyView& d, TieBreaker& ties, std::size_t* tied = nullptr);

struct SetChoice {
  std::size_t index = 0;  // into the candidate list
  std::size_t tied = 0;
};

/// Picks from scored candidates: drop guarded-out ones (min link rate below
/// `guard_step`, if set), keep the minimal deficiency, then the minimal
/// total hop count, then draw uniformly. nullopt if nothing survives.
std::optional<SetChoice> select_from_scores(std::span<const CandidateScore> scores, std::span<const int> hops,
                                            std::optional<Rate> guard_step, TieBreaker& ties);

/// select_from_scores over plain candidate sets.
std::optional<SetChoice> select_optimal_set(std::span<const MPathSet> candidates, const DeficiencyView& d,
                                            TieBreaker& ties, std::optional<Rate> guard_step = std::nullopt);

/// R_eff(pair) += delta_r and R_eff(link) -= delta_r on every member link.
/// Throws GuardViolation (leaving `eff` untouched) when `strict_guard` is
/// set and some link holds less than delta_r.
void apply_increment(EffectiveRateMatrix& eff, NodePair pair, const MPathSet& set, Rate delta_r,
                     bool strict_guard = false);
/// Exact inverse of apply_increment.
void revert_increment(EffectiveRateMatrix& eff, NodePair pair, const MPathSet& set, Rate delta_r);

/// The greedy routing loop. Bit-reproducible for a given config.seed when
/// `ties` is null; otherwise all random choices come from `ties`.
RoutingOutcome run(const NetworkGraph& g, const TargetMatrix& t, const RouterConfig& cfg,
                   TieBreaker* ties = nullptr);

/// Effective rates implied by a routing list: links lose the rate of every
/// record crossing them, remote pairs gain the rate of their records.
EffectiveRateMatrix effective_from_routing(const NetworkGraph& g, const RoutingList& list);

}  // namespace mpath
