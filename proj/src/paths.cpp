#include "mpath/paths.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mpath {

std::vector<NodeId> Path::interior() const {
  if (nodes.size() <= 2) return {};
  return {nodes.begin() + 1, nodes.end() - 1};
}

std::vector<NodePair> Path::links() const {
  std::vector<NodePair> out;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) out.emplace_back(nodes[k], nodes[k + 1]);
  return out;
}

Path make_path(std::vector<NodeId> nodes) {
  if (nodes.size() >= 2 && nodes.front() > nodes.back()) {
    std::reverse(nodes.begin(), nodes.end());
  }
  return Path{std::move(nodes)};
}

MPathSet::MPathSet(std::vector<Path> paths) : paths_(std::move(paths)) {
  if (paths_.empty()) throw std::invalid_argument("M-path set must contain at least one path");
  for (auto& p : paths_) {
    if (p.nodes.size() < 2) throw std::invalid_argument("path needs at least two nodes");
    p = make_path(std::move(p.nodes));
    auto sorted = p.nodes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("path " + to_string(p) + " is not simple");
    }
  }
  std::sort(paths_.begin(), paths_.end());
  endpoints_ = NodePair(paths_.front().front(), paths_.front().back());
  for (std::size_t a = 0; a < paths_.size(); ++a) {
    if (NodePair(paths_[a].front(), paths_[a].back()) != endpoints_) {
      throw std::invalid_argument("paths in an M-path set must share endpoints");
    }
    const auto ia = paths_[a].interior();
    for (std::size_t b = a + 1; b < paths_.size(); ++b) {
      if (paths_[a] == paths_[b]) throw std::invalid_argument("duplicate path " + to_string(paths_[a]));
      for (NodeId v : paths_[b].interior()) {
        if (std::find(ia.begin(), ia.end(), v) != ia.end()) {
          throw std::invalid_argument("paths " + to_string(paths_[a]) + " and " + to_string(paths_[b]) +
                                      " overlap at node " + std::to_string(v));
        }
      }
    }
  }
}

int MPathSet::total_hops() const {
  int h = 0;
  for (const auto& p : paths_) h += p.hops();
  return h;
}

std::vector<NodePair> MPathSet::links() const {
  std::vector<NodePair> out;
  for (const auto& p : paths_) {
    auto l = p.links();
    out.insert(out.end(), l.begin(), l.end());
  }
  return out;
}

std::string to_string(const Path& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    if (k) s += ", ";
    s += std::to_string(p.nodes[k]);
  }
  return s + ")";
}

std::string to_string(const MPathSet& set) {
  std::string s = "{";
  for (std::size_t k = 0; k < set.paths().size(); ++k) {
    if (k) s += ", ";
    s += to_string(set.paths()[k]);
  }
  return s + "}";
}

namespace {

struct PathSearch {
  const NetworkGraph& g;
  NodeId target;
  int max_hops;
  std::vector<char> on_path;
  std::vector<NodeId> stack;
  std::vector<Path> out;

  void visit(NodeId u) {
    if (u == target) {
      out.push_back(Path{stack});
      return;
    }
    if (static_cast<int>(stack.size()) - 1 >= max_hops) return;
    for (NodeId v : g.neighbors(u)) {
      if (on_path[static_cast<std::size_t>(v)]) continue;
      on_path[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
      visit(v);
      stack.pop_back();
      on_path[static_cast<std::size_t>(v)] = 0;
    }
  }
};

}  // namespace

std::vector<Path> enumerate_simple_paths(const NetworkGraph& g, NodeId i, NodeId j,
                                         std::optional<int> hop_limit) {
  if (!g.contains(i) || !g.contains(j) || i == j) {
    throw std::invalid_argument("enumerate_simple_paths needs two distinct nodes of the graph");
  }
  const NodeId src = std::min(i, j);
  PathSearch search{g, std::max(i, j), hop_limit.value_or(g.node_count()),
                    std::vector<char>(static_cast<std::size_t>(g.node_count()), 0), {src}, {}};
  search.on_path[static_cast<std::size_t>(src)] = 1;
  search.visit(src);
  // Neighbours are visited in ascending order, so paths come out sorted.
  return std::move(search.out);
}

std::vector<MPathSet> enumerate_m_path_sets(const std::vector<Path>& paths, int m) {
  std::vector<MPathSet> out;
  if (m < 1 || paths.size() < static_cast<std::size_t>(m)) return out;

  NodeId max_node = 0;
  for (const auto& p : paths) {
    for (NodeId v : p.nodes) max_node = std::max(max_node, v);
  }
  const std::size_t words = static_cast<std::size_t>(max_node) / 64 + 1;
  // Interior node bitmask of path k in words [k * words, (k + 1) * words).
  std::vector<std::uint64_t> interior(paths.size() * words, 0);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    for (NodeId v : paths[k].interior()) {
      interior[k * words + static_cast<std::size_t>(v) / 64] |= std::uint64_t{1} << (static_cast<std::size_t>(v) % 64);
    }
  }

  // Output of enumerate_simple_paths is oriented, sorted and simple, so
  // disjoint picks in index order are canonical sets already.
  const bool canonical = std::is_sorted(paths.begin(), paths.end()) &&
                         std::adjacent_find(paths.begin(), paths.end()) == paths.end() &&
                         std::all_of(paths.begin(), paths.end(), [&](const Path& p) {
                           return p.nodes.size() >= 2 && p.front() < p.back() && p.front() == paths[0].front() &&
                                  p.back() == paths[0].back() && make_path(p.nodes) == p &&
                                  std::set<NodeId>(p.nodes.begin(), p.nodes.end()).size() == p.nodes.size();
                         });

  std::vector<std::size_t> chosen;
  std::vector<std::uint64_t> used(words, 0);
  auto disjoint = [&](std::size_t k) {
    const std::uint64_t* mask = &interior[k * words];
    if (words == 1) return (used[0] & mask[0]) == 0;
    for (std::size_t w = 0; w < words; ++w) {
      if (used[w] & mask[w]) return false;
    }
    return true;
  };

  auto extend = [&](auto&& self, std::size_t start) -> void {
    if (chosen.size() == static_cast<std::size_t>(m)) {
      std::vector<Path> members;
      members.reserve(chosen.size());
      for (std::size_t k : chosen) members.push_back(paths[k]);
      if (canonical) {
        out.push_back(MPathSet(std::move(members), MPathSet::Trusted{}));
      } else {
        out.emplace_back(std::move(members));
      }
      return;
    }
    const std::size_t remaining = static_cast<std::size_t>(m) - chosen.size();
    for (std::size_t k = start; k + remaining <= paths.size(); ++k) {
      if (!disjoint(k)) continue;
      chosen.push_back(k);
      for (std::size_t w = 0; w < words; ++w) used[w] |= interior[k * words + w];
      self(self, k + 1);
      for (std::size_t w = 0; w < words; ++w) used[w] &= ~interior[k * words + w];
      chosen.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

const std::vector<MPathSet>& CandidateCache::get(NodePair pair) {
  std::lock_guard lock(mutex_);
  auto it = sets_.find(pair);
  if (it == sets_.end()) {
    auto paths = enumerate_simple_paths(*graph_, pair.first, pair.second, hop_limit_);
    it = sets_.emplace(pair, enumerate_m_path_sets(paths, m_)).first;
  }
  return it->second;
}

std::vector<NodePair> remote_pairs_without_m_sets(const NetworkGraph& g, int m, std::optional<int> hop_limit) {
  std::vector<NodePair> out;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (NodeId j = i + 1; j < g.node_count(); ++j) {
      if (g.adjacent(i, j)) continue;
      if (enumerate_m_path_sets(enumerate_simple_paths(g, i, j, hop_limit), m).empty()) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

}  // namespace mpath
