#pragma once

#include <cstdint>
#include <optional>

#include "mpath/types.hpp"

namespace mpath {

/// Parameters of one routing run.
struct RouterConfig {
  int m = 2;
  /// Per-iteration step, in rate units. Must be positive for run().
  Rate delta_r{100};
  /// Maximum accepted iterations; nullopt means unbounded.
  std::optional<std::int64_t> r_max;
  std::uint64_t seed = 0;
  /// Maximum hop count of enumerated paths; nullopt means unlimited.
  std::optional<int> hop_limit;
  /// Skip candidate sets that would drive some link's effective rate
  /// below zero.
  bool strict_guard = true;
  /// Record every candidate set and its deficiency in the trace.
  bool record_candidates = false;
  /// Score candidates with the OpenMP kernel instead of the serial one.
  bool parallel_scoring = false;

  bool operator==(const RouterConfig&) const = default;
};

}  // namespace mpath
