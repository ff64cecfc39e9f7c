#include "mpath/routing.hpp"

#include <algorithm>
#include <limits>

namespace mpath {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::r_max: return "r_max";
    case StopReason::direct_pair_worst: return "direct_pair_worst";
    case StopReason::cost_worsened: return "cost_worsened";
    case StopReason::no_m_set: return "no_m_set";
    case StopReason::guard_exhausted: return "guard_exhausted";
  }
  return "unknown";
}

void RoutingList::add(const MPathSet& set, Rate rate) {
  auto [it, inserted] = records_.try_emplace(set, rate);
  if (!inserted) it->second += rate;
}

std::vector<RoutingRecord> RoutingList::to_vector() const {
  std::vector<RoutingRecord> out;
  out.reserve(records_.size());
  for (const auto& [set, rate] : records_) out.push_back({set, rate});
  return out;
}

Rate RoutingList::routed(NodePair pair) const {
  Rate sum{0};
  for (const auto& [set, rate] : records_) {
    if (set.endpoints() == pair) sum += rate;
  }
  return sum;
}

Rate RoutingList::total() const {
  Rate sum{0};
  for (const auto& [set, rate] : records_) sum += rate;
  return sum;
}

Rate cost_delta(const TargetMatrix& t, const EffectiveRateMatrix& eff) { return cost_delta_serial(t, eff); }

NodePair select_worst_pair(const DeficiencyView& d, TieBreaker& ties, std::size_t* tied) {
  const int n = d.targets->size();
  if (n < 2) throw std::invalid_argument("select_worst_pair needs at least one pair");
  Rate worst{std::numeric_limits<std::int64_t>::min()};
  std::vector<NodePair> argmax;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const Rate v = d(i, j);
      if (v > worst) {
        worst = v;
        argmax.clear();
      }
      if (v == worst) argmax.emplace_back(i, j);
    }
  }
  if (tied) *tied = argmax.size();
  return argmax[ties.pick(TieKind::pair, argmax.size())];
}

std::optional<SetChoice> select_from_scores(std::span<const CandidateScore> scores, std::span<const int> hops,
                                            std::optional<Rate> guard_step, TieBreaker& ties) {
  std::vector<std::size_t> pool;
  pool.reserve(scores.size());
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (guard_step && scores[c].min_link_rate < *guard_step) continue;
    pool.push_back(c);
  }
  if (pool.empty()) return std::nullopt;

  Rate best = scores[pool.front()].deficiency;
  for (std::size_t c : pool) best = std::min(best, scores[c].deficiency);
  std::erase_if(pool, [&](std::size_t c) { return scores[c].deficiency != best; });

  int shortest = hops[pool.front()];
  for (std::size_t c : pool) shortest = std::min(shortest, hops[c]);
  std::erase_if(pool, [&](std::size_t c) { return hops[c] != shortest; });

  return SetChoice{pool[ties.pick(TieKind::set, pool.size())], pool.size()};
}

std::optional<SetChoice> select_optimal_set(std::span<const MPathSet> candidates, const DeficiencyView& d,
                                            TieBreaker& ties, std::optional<Rate> guard_step) {
  const auto table = CandidateTable::build(candidates);
  std::vector<CandidateScore> scores(table.size());
  score_candidates_serial(table, d, scores);
  return select_from_scores(scores, table.hops, guard_step, ties);
}

void apply_increment(EffectiveRateMatrix& eff, NodePair pair, const MPathSet& set, Rate delta_r,
                     bool strict_guard) {
  if (set.endpoints() != pair) {
    throw std::invalid_argument("M-path set " + to_string(set) + " does not connect the selected pair");
  }
  const auto links = set.links();
  if (strict_guard) {
    for (const auto& l : links) {
      if (eff.at(l) < delta_r) {
        throw GuardViolation("link (" + std::to_string(l.first) + "," + std::to_string(l.second) +
                             ") cannot supply another increment");
      }
    }
  }
  eff.set(pair, eff.at(pair) + delta_r);
  for (const auto& l : links) eff.set(l, eff.at(l) - delta_r);
}

void revert_increment(EffectiveRateMatrix& eff, NodePair pair, const MPathSet& set, Rate delta_r) {
  eff.set(pair, eff.at(pair) - delta_r);
  for (const auto& l : set.links()) eff.set(l, eff.at(l) + delta_r);
}

namespace {

void check_preconditions(const NetworkGraph& g, const TargetMatrix& t, const RouterConfig& cfg) {
  if (cfg.m < 1) throw PreconditionError("M must be >= 1");
  if (cfg.delta_r <= Rate(0)) throw PreconditionError("delta_r must be positive");
  if (cfg.r_max && *cfg.r_max < 0) throw PreconditionError("r_max must be non-negative");
  if (t.size() != g.node_count()) throw PreconditionError("target matrix does not match the graph");
  const auto report = validate(g, cfg.m);
  if (!report.connected) throw PreconditionError("network graph is disconnected");
  if (!report.degree_violations.empty()) {
    throw PreconditionError("node " + std::to_string(report.degree_violations.front()) + " has degree below M=" +
                            std::to_string(cfg.m));
  }
}

}  // namespace

RoutingOutcome run(const NetworkGraph& g, const TargetMatrix& t, const RouterConfig& cfg, TieBreaker* ties) {
  check_preconditions(g, t, cfg);
  RandomTieBreaker seeded(cfg.seed);
  TieBreaker& chooser = ties ? *ties : seeded;

  RoutingOutcome out;
  out.effective = initial_effective_rates(g);
  const DeficiencyView d{&t, &out.effective};
  CandidateCache cache(g, cfg.m, cfg.hop_limit);
  std::map<NodePair, CandidateTable> tables;
  std::vector<CandidateScore> scores;

  Rate delta = cost_delta(t, out.effective);
  auto finish = [&](StopReason why) {
    out.stop_reason = why;
    out.final_delta = delta;
    return out;
  };

  while (delta > Rate(0)) {
    if (cfg.r_max && out.iterations >= *cfg.r_max) return finish(StopReason::r_max);

    IterationTrace step;
    step.r = out.iterations + 1;
    step.delta_before = delta;
    step.delta_after = delta;
    step.selected_pair = select_worst_pair(d, chooser, &step.pairs_tied);
    const NodePair pair = step.selected_pair;

    auto halt = [&](StopReason why) {
      step.stop_reason = why;
      out.trace.push_back(std::move(step));
      return finish(why);
    };

    if (g.adjacent(pair.first, pair.second)) return halt(StopReason::direct_pair_worst);

    const auto& candidates = cache.get(pair);
    if (candidates.empty()) return halt(StopReason::no_m_set);
    auto table_it = tables.find(pair);
    if (table_it == tables.end()) table_it = tables.emplace(pair, CandidateTable::build(candidates)).first;
    const CandidateTable& table = table_it->second;

    scores.resize(table.size());
    if (cfg.parallel_scoring) {
      score_candidates_parallel(table, d, scores);
    } else {
      score_candidates_serial(table, d, scores);
    }
    const std::optional<Rate> guard = cfg.strict_guard ? std::optional<Rate>(cfg.delta_r) : std::nullopt;
    if (cfg.record_candidates) {
      for (std::size_t c = 0; c < table.size(); ++c) {
        step.candidates.push_back({candidates[c], scores[c].deficiency, guard && scores[c].min_link_rate < *guard});
      }
    }

    const auto choice = select_from_scores(scores, table.hops, guard, chooser);
    if (!choice) return halt(StopReason::guard_exhausted);
    step.candidates_tied = choice->tied;
    const MPathSet& set = candidates[choice->index];
    step.chosen_set = set;

    apply_increment(out.effective, pair, set, cfg.delta_r);
    const Rate updated = cost_delta(t, out.effective);
    step.delta_after = updated;
    if (updated > delta) {
      revert_increment(out.effective, pair, set, cfg.delta_r);
      return halt(StopReason::cost_worsened);
    }
    step.accepted = true;
    out.routing_list.add(set, cfg.delta_r);
    delta = updated;
    ++out.iterations;
    out.trace.push_back(std::move(step));
  }
  return finish(StopReason::converged);
}

EffectiveRateMatrix effective_from_routing(const NetworkGraph& g, const RoutingList& list) {
  EffectiveRateMatrix eff = initial_effective_rates(g);
  for (const auto& [set, rate] : list.records()) {
    apply_increment(eff, set.endpoints(), set, rate);
  }
  return eff;
}

}  // namespace mpath
