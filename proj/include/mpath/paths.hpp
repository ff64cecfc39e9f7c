#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mpath/network.hpp"

namespace mpath {

/// Simple path, stored oriented from its smaller endpoint.
struct Path {
  std::vector<NodeId> nodes;

  NodeId front() const { return nodes.front(); }
  NodeId back() const { return nodes.back(); }
  int hops() const { return static_cast<int>(nodes.size()) - 1; }
  /// Nodes strictly between the endpoints.
  std::vector<NodeId> interior() const;
  /// Consecutive node pairs, in path order.
  std::vector<NodePair> links() const;

  auto operator<=>(const Path&) const = default;
};

/// Orients `nodes` so that the first node is the smaller endpoint.
Path make_path(std::vector<NodeId> nodes);

/// M internally disjoint paths between one node pair, in canonical form:
/// every member oriented from the smaller endpoint, members sorted
/// lexicographically. Two sets are equal iff they contain the same paths.
class MPathSet {
 public:
  MPathSet() = default;
  /// Canonicalises `paths`. Throws std::invalid_argument if the paths do not
  /// share endpoints or are not pairwise internally disjoint.
  explicit MPathSet(std::vector<Path> paths);

  NodePair endpoints() const { return endpoints_; }
  const std::vector<Path>& paths() const { return paths_; }
  std::size_t size() const { return paths_.size(); }
  int total_hops() const;
  /// Every link used by any member path.
  std::vector<NodePair> links() const;

  auto operator<=>(const MPathSet& o) const {
    if (auto c = endpoints_ <=> o.endpoints_; c != 0) return c;
    return paths_ <=> o.paths_;
  }
  bool operator==(const MPathSet&) const = default;

 private:
  friend std::vector<MPathSet> enumerate_m_path_sets(const std::vector<Path>& paths, int m);
  struct Trusted {};
  /// Members already oriented, sorted and disjoint.
  MPathSet(std::vector<Path> paths, Trusted)
      : endpoints_(paths.front().front(), paths.front().back()), paths_(std::move(paths)) {}

  NodePair endpoints_;
  std::vector<Path> paths_;
};

/// "(0, 1, 4)"
std::string to_string(const Path& p);
/// "{(0, 1, 4), (0, 3, 4)}"
std::string to_string(const MPathSet& s);

/// All simple paths between i and j with at most `hop_limit` hops, oriented
/// from min(i, j), in lexicographic order of their node sequences.
std::vector<Path> enumerate_simple_paths(const NetworkGraph& g, NodeId i, NodeId j,
                                         std::optional<int> hop_limit = std::nullopt);

/// Every M-element subset of `paths` whose members are pairwise internally
/// disjoint. `paths` must share endpoints and be sorted; output order follows
/// the lexicographic order of member index tuples.
std::vector<MPathSet> enumerate_m_path_sets(const std::vector<Path>& paths, int m);

/// Deficiency of the worst link on the worst path of `s`.
template <typename Deficiency>
Rate set_deficiency(const MPathSet& s, const Deficiency& d) {
  bool first = true;
  Rate worst{0};
  for (const auto& p : s.paths()) {
    for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) {
      const Rate v = d(p.nodes[k], p.nodes[k + 1]);
      if (first || v > worst) worst = v;
      first = false;
    }
  }
  return worst;
}

/// D(i, j) = T_ij - R_eff_ij over borrowed matrices.
struct DeficiencyView {
  const TargetMatrix* targets;
  const EffectiveRateMatrix* effective;

  Rate operator()(NodeId i, NodeId j) const { return (*targets)(i, j) - (*effective)(i, j); }
};

/// Per-pair memo of candidate M-path sets for one graph and configuration.
/// Safe for concurrent use.
class CandidateCache {
 public:
  CandidateCache(const NetworkGraph& g, int m, std::optional<int> hop_limit)
      : graph_(&g), m_(m), hop_limit_(hop_limit) {}

  const std::vector<MPathSet>& get(NodePair pair);

 private:
  const NetworkGraph* graph_;
  int m_;
  std::optional<int> hop_limit_;
  std::mutex mutex_;
  std::map<NodePair, std::vector<MPathSet>> sets_;
};

/// Remote pairs of `g` that admit no M-path set; for ValidationReport.
std::vector<NodePair> remote_pairs_without_m_sets(const NetworkGraph& g, int m,
                                                  std::optional<int> hop_limit = std::nullopt);

}  // namespace mpath
