#pragma once

#include <optional>
#include <vector>

#include "mpath/types.hpp"

namespace mpath {

struct Edge {
  NodePair nodes;
  Rate rate;

  bool operator==(const Edge&) const = default;
};

/// Undirected graph of QKD links weighted by key generation rate.
///
/// Immutable after construction. The constructor enforces the structural
/// invariants (no self-loops, no duplicate pairs, positive rates); it does
/// not require connectivity so that disconnected inputs can still be
/// reported on by validate().
class NetworkGraph {
 public:
  NetworkGraph() = default;
  NetworkGraph(int node_count, std::vector<Edge> edges, RateScale scale = {});

  int node_count() const { return node_count_; }
  const RateScale& scale() const { return scale_; }

  /// Edges sorted by node pair.
  const std::vector<Edge>& edges() const { return edges_; }
  /// Neighbours of `i` in ascending order.
  const std::vector<NodeId>& neighbors(NodeId i) const { return adjacency_.at(static_cast<std::size_t>(i)); }
  int degree(NodeId i) const { return static_cast<int>(neighbors(i).size()); }

  bool adjacent(NodeId i, NodeId j) const;
  /// R_ij, zero when there is no link.
  Rate rate(NodeId i, NodeId j) const { return rates_(i, j); }
  const PairMatrix<Rate>& rate_matrix() const { return rates_; }

  /// Index of the edge (i, j) in edges(), or nullopt.
  std::optional<std::size_t> edge_index(NodeId i, NodeId j) const;

  bool connected() const;
  bool contains(NodeId i) const { return i >= 0 && i < node_count_; }

  bool operator==(const NetworkGraph& o) const {
    return node_count_ == o.node_count_ && edges_ == o.edges_ && scale_ == o.scale_;
  }

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  RateScale scale_;
  std::vector<std::vector<NodeId>> adjacency_;
  PairMatrix<Rate> rates_;
  PairMatrix<int> edge_ids_;  // -1 where no edge
};

/// Targets expanded from a uniform scalar to every off-diagonal pair.
TargetMatrix uniform_targets(int node_count, Rate t);

/// Throws InputError on a negative, asymmetric, or non-zero-diagonal matrix.
void check_targets(const TargetMatrix& t);

/// R_eff initialised to R_ij on edges and zero elsewhere.
EffectiveRateMatrix initial_effective_rates(const NetworkGraph& g);

struct ValidationReport {
  int min_degree = 0;
  int required_degree = 0;
  std::vector<NodeId> degree_violations;
  bool connected = false;
  /// Filled in by the caller after path enumeration, if at all.
  std::vector<NodePair> remote_pairs_without_m_sets;

  bool ok() const { return degree_violations.empty() && connected && remote_pairs_without_m_sets.empty(); }
  bool operator==(const ValidationReport&) const = default;
};

ValidationReport validate(const NetworkGraph& g, int m);

}  // namespace mpath
