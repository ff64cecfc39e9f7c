#include "mpath/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace mpath {

Rate RateScale::from_kbps(double kbps) const {
  if (!std::isfinite(kbps)) {
    throw std::invalid_argument("rate is not a finite number");
  }
  const double units = kbps * 1000.0 / bits_per_unit;
  const double rounded = std::round(units);
  if (std::abs(units - rounded) > 1e-6 * std::max(1.0, std::abs(units))) {
    throw std::invalid_argument("rate " + format_number(kbps) +
                                " kbit/s is not a multiple of the base resolution (" +
                                format_number(bits_per_unit) + " bit/s)");
  }
  return Rate(static_cast<std::int64_t>(rounded));
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

NetworkGraph::NetworkGraph(int node_count, std::vector<Edge> edges, RateScale scale)
    : node_count_(node_count), edges_(std::move(edges)), scale_(scale) {
  if (node_count_ < 2) {
    throw InputError("network needs at least 2 nodes");
  }
  if (!(scale_.bits_per_unit > 0.0)) {
    throw InputError("base resolution must be positive");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.nodes < b.nodes; });

  adjacency_.assign(static_cast<std::size_t>(node_count_), {});
  rates_ = PairMatrix<Rate>(node_count_);
  edge_ids_ = PairMatrix<int>(node_count_, -1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto [u, v] = edges_[k].nodes;
    if (!contains(u) || !contains(v)) {
      throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") references unknown node");
    }
    if (u == v) {
      throw InputError("self-loop at node " + std::to_string(u));
    }
    if (edges_[k].rate <= Rate(0)) {
      throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") has non-positive rate");
    }
    if (edge_ids_(u, v) >= 0) {
      throw InputError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    edge_ids_.set(u, v, static_cast<int>(k));
    rates_.set(u, v, edges_[k].rate);
    adjacency_[static_cast<std::size_t>(u)].push_back(v);
    adjacency_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& nb : adjacency_) {
    std::sort(nb.begin(), nb.end());
  }
}

bool NetworkGraph::adjacent(NodeId i, NodeId j) const {
  return contains(i) && contains(j) && edge_ids_(i, j) >= 0;
}

std::optional<std::size_t> NetworkGraph::edge_index(NodeId i, NodeId j) const {
  if (!adjacent(i, j)) return std::nullopt;
  return static_cast<std::size_t>(edge_ids_(i, j));
}

bool NetworkGraph::connected() const {
  std::vector<char> seen(static_cast<std::size_t>(node_count_), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : neighbors(u)) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == node_count_;
}

TargetMatrix uniform_targets(int node_count, Rate t) {
  TargetMatrix m(node_count);
  for (NodeId i = 0; i < node_count; ++i) {
    for (NodeId j = i + 1; j < node_count; ++j) {
      m.set(i, j, t);
    }
  }
  return m;
}

void check_targets(const TargetMatrix& t) {
  for (NodeId i = 0; i < t.size(); ++i) {
    if (t(i, i) != Rate(0)) {
      throw InputError("target diagonal entry " + std::to_string(i) + " must be zero");
    }
    for (NodeId j = 0; j < t.size(); ++j) {
      if (t(i, j) < Rate(0)) {
        throw InputError("negative target for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (t(i, j) != t(j, i)) {
        throw InputError("asymmetric target for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

EffectiveRateMatrix initial_effective_rates(const NetworkGraph& g) {
  return g.rate_matrix();
}

ValidationReport validate(const NetworkGraph& g, int m) {
  ValidationReport report;
  report.required_degree = m;
  report.min_degree = g.node_count() > 0 ? g.degree(0) : 0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    report.min_degree = std::min(report.min_degree, g.degree(i));
    if (g.degree(i) < m) {
      report.degree_violations.push_back(i);
    }
  }
  report.connected = g.connected();
  return report;
}

}  // namespace mpath
