#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mpath/network.hpp"
#include "mpath/routing.hpp"

namespace mpath::oracle {

inline std::string data_file(const std::string& name) { return std::string(MPATH_DATA_DIR) + "/" + name; }

/// Every ordered sequence of distinct intermediate nodes, kept when all
/// consecutive nodes are linked. Exponential, fine for n <= 8.
inline std::set<std::vector<NodeId>> brute_force_paths(const NetworkGraph& g, NodeId i, NodeId j) {
  const NodeId s = std::min(i, j);
  const NodeId t = std::max(i, j);
  std::vector<NodeId> others;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v != s && v != t) others.push_back(v);
  }
  std::set<std::vector<NodeId>> out;
  const std::size_t n = others.size();
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::vector<NodeId> chosen;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1U << k)) chosen.push_back(others[k]);
    }
    std::sort(chosen.begin(), chosen.end());
    do {
      NodeId prev = s;
      bool ok = true;
      for (std::size_t k = 0; k < chosen.size() && ok; ++k) {
        ok = g.adjacent(prev, chosen[k]);
        prev = chosen[k];
      }
      if (ok && g.adjacent(prev, t)) {
        std::vector<NodeId> seq{s};
        seq.insert(seq.end(), chosen.begin(), chosen.end());
        seq.push_back(t);
        out.insert(std::move(seq));
      }
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return out;
}

/// M-subsets of `paths` (bitmask enumeration) that are pairwise internally
/// disjoint, as sets of node sequences.
inline std::set<std::set<std::vector<NodeId>>> brute_force_m_sets(const std::vector<std::vector<NodeId>>& paths,
                                                                   int m) {
  std::set<std::set<std::vector<NodeId>>> out;
  const std::size_t n = paths.size();
  if (n > 20) return out;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    if (std::popcount(mask) != m) continue;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1U << k)) idx.push_back(k);
    }
    bool ok = true;
    for (std::size_t a = 0; a < idx.size() && ok; ++a) {
      for (std::size_t b = a + 1; b < idx.size() && ok; ++b) {
        const auto& p = paths[idx[a]];
        const auto& q = paths[idx[b]];
        for (std::size_t x = 1; x + 1 < p.size() && ok; ++x) {
          for (std::size_t y = 1; y + 1 < q.size() && ok; ++y) ok = p[x] != q[y];
        }
      }
    }
    if (ok) {
      std::set<std::vector<NodeId>> s;
      for (std::size_t k : idx) s.insert(paths[k]);
      out.insert(s);
    }
  }
  return out;
}

/// Tie-breaker replaying a fixed script of choices; records the arity of
/// each real tie so a driver can enumerate every branch.
class ScriptedTies final : public TieBreaker {
 public:
  explicit ScriptedTies(std::vector<std::size_t> script) : script_(std::move(script)) {}

  std::size_t pick(TieKind, std::size_t n) override {
    if (n <= 1) return 0;
    const std::size_t pos = arities_.size();
    arities_.push_back(n);
    return pos < script_.size() ? script_[pos] : 0;
  }

  const std::vector<std::size_t>& arities() const { return arities_; }

 private:
  std::vector<std::size_t> script_;
  std::vector<std::size_t> arities_;
};

/// Runs `fn` once for every combination of tie-break choices the routing
/// loop can encounter (depth-first over scripts).
inline void for_each_branch(const std::function<std::vector<std::size_t>(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::vector<std::size_t>> todo{{}};
  while (!todo.empty()) {
    auto script = todo.back();
    todo.pop_back();
    const auto arities = fn(script);
    // Branch on every tie beyond the scripted prefix.
    for (std::size_t pos = script.size(); pos < arities.size(); ++pos) {
      for (std::size_t c = 1; c < arities[pos]; ++c) {
        auto next = script;
        next.resize(pos, 0);
        next.push_back(c);
        todo.push_back(next);
      }
      script.push_back(0);
    }
  }
}

/// Random connected graph with unit rates: a random spanning tree plus each
/// other pair with probability p.
template <typename Rng>
NetworkGraph random_connected_graph(int n, double p, Rng& rng) {
  std::vector<Edge> edges;
  std::set<NodePair> used;
  for (NodeId v = 1; v < n; ++v) {
    const NodeId u = static_cast<NodeId>(rng.uniform_index(static_cast<std::size_t>(v)));
    used.insert(NodePair(u, v));
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (static_cast<double>(rng.next() >> 11) / 9007199254740992.0 < p) used.insert(NodePair(u, v));
    }
  }
  for (const auto& e : used) edges.push_back({e, Rate(1000)});
  return NetworkGraph(n, std::move(edges));
}

}  // namespace mpath::oracle
