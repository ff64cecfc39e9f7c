#include "mpath/keysim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "json.hpp"

namespace mpath {

namespace {

double exact_bits(Rate r, const RateScale& scale, double tau) { return scale.to_bps(r) * tau; }

std::string pair_name(NodePair p) { return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")"; }

}  // namespace

std::size_t key_bits(Rate r, const RateScale& scale, double tau) {
  const double v = exact_bits(r, scale, tau);
  if (v <= 0) return 0;
  return static_cast<std::size_t>(std::floor(v + 1e-9 * std::max(1.0, v)));
}

bool whole_bits(Rate r, const RateScale& scale, double tau) {
  const double v = exact_bits(r, scale, tau);
  return std::abs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::abs(v));
}

const BitString& KeyPool::copy_at(NodeId n) const {
  if (n == edge.first) return at_first;
  if (n == edge.second) return at_second;
  throw std::invalid_argument("node " + std::to_string(n) + " does not hold the pool of link " + pair_name(edge));
}

BitString& KeyPool::copy_at(NodeId n) {
  return const_cast<BitString&>(static_cast<const KeyPool&>(*this).copy_at(n));
}

std::vector<KeyPool> accumulate_pools(const NetworkGraph& g, double tau, std::uint64_t seed) {
  if (!(tau > 0)) throw std::invalid_argument("accumulation period must be positive");
  const Rng root(seed);
  std::vector<KeyPool> pools;
  pools.reserve(g.edges().size());
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    const auto& e = g.edges()[k];
    Rng stream = root.fork(k);
    BitString bits = BitString::random(key_bits(e.rate, g.scale(), tau), stream);
    pools.push_back({e.nodes, bits, bits});
  }
  return pools;
}

const Interval& SegmentAllocation::relay_segment(const NetworkGraph& g, std::size_t record, NodePair link) const {
  const auto idx = g.edge_index(link.first, link.second);
  if (!idx) throw std::out_of_range("no link " + pair_name(link));
  const auto& segs = edges[*idx].relay;
  const auto it = segs.find(record);
  if (it == segs.end()) throw std::out_of_range("record has no segment on link " + pair_name(link));
  return it->second;
}

SegmentAllocation allocate_segments(const NetworkGraph& g, const std::vector<KeyPool>& pools,
                                    const RoutingList& list, const EffectiveRateMatrix& eff, double tau) {
  if (pools.size() != g.edges().size()) throw std::invalid_argument("one pool per link expected");
  SegmentAllocation alloc;
  alloc.tau = tau;
  alloc.records = list.to_vector();
  for (const auto& rec : alloc.records) alloc.record_bits.push_back(key_bits(rec.rate, g.scale(), tau));

  alloc.edges.resize(g.edges().size());
  std::vector<std::size_t> cursor(g.edges().size(), 0);
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    const NodePair e = g.edges()[k].nodes;
    auto& segs = alloc.edges[k];
    segs.edge = e;
    segs.pool_bits = pools[k].size();
    if (eff.at(e) < Rate(0)) {
      throw CapacityError(e, "link " + pair_name(e) + " has a negative effective rate");
    }
    segs.effective = {0, key_bits(eff.at(e), g.scale(), tau)};
    cursor[k] = segs.effective.length;
  }
  for (std::size_t r = 0; r < alloc.records.size(); ++r) {
    const auto& set = alloc.records[r].set;
    if (g.adjacent(set.endpoints().first, set.endpoints().second)) {
      throw std::invalid_argument("routing record " + to_string(set) + " serves a directly linked pair");
    }
    for (const auto& link : set.links()) {
      const auto k = g.edge_index(link.first, link.second);
      if (!k) throw std::invalid_argument("routing record " + to_string(set) + " uses a missing link");
      alloc.edges[*k].relay[r] = {cursor[*k], alloc.record_bits[r]};
      cursor[*k] += alloc.record_bits[r];
    }
  }
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    if (cursor[k] > alloc.edges[k].pool_bits) {
      const NodePair e = alloc.edges[k].edge;
      throw CapacityError(e, "link " + pair_name(e) + " needs " + std::to_string(cursor[k]) + " bits but its pool holds " +
                                 std::to_string(alloc.edges[k].pool_bits));
    }
  }
  return alloc;
}

PathRelay relay_path_key(const NetworkGraph& g, const Path& path, const SegmentAllocation& alloc,
                         std::size_t record, const std::vector<KeyPool>& pools) {
  const auto& nodes = path.nodes;
  // Segment of `link` as stored by `holder`.
  auto segment = [&](NodeId a, NodeId b, NodeId holder) {
    const auto k = g.edge_index(a, b);
    if (!k) throw std::out_of_range("no link " + pair_name(NodePair(a, b)));
    const Interval& iv = alloc.relay_segment(g, record, NodePair(a, b));
    return pools[*k].copy_at(holder).slice(iv.offset, iv.length);
  };

  PathRelay out;
  out.path = path;
  out.key_at_first = segment(nodes[0], nodes[1], nodes[0]);
  for (std::size_t t = 1; t + 1 < nodes.size(); ++t) {
    const NodeId k = nodes[t];
    out.publishers.push_back(k);
    out.messages.push_back(segment(nodes[t - 1], k, k) ^ segment(k, nodes[t + 1], k));
  }
  const std::size_t last = nodes.size() - 1;
  BitString key = segment(nodes[last - 1], nodes[last], nodes[last]);
  for (std::size_t t = out.messages.size(); t-- > 0;) key ^= out.messages[t];
  out.key_at_last = std::move(key);
  return out;
}

namespace {

RecordRelay relay_record(const NetworkGraph& g, const SegmentAllocation& alloc, const std::vector<KeyPool>& pools,
                         std::size_t r) {
  RecordRelay rr;
  rr.record = r;
  for (const auto& p : alloc.records[r].set.paths()) rr.paths.push_back(relay_path_key(g, p, alloc, r, pools));
  return rr;
}

}  // namespace

std::vector<RecordRelay> relay_all_serial(const NetworkGraph& g, const SegmentAllocation& alloc,
                                          const std::vector<KeyPool>& pools) {
  std::vector<RecordRelay> out;
  out.reserve(alloc.records.size());
  for (std::size_t r = 0; r < alloc.records.size(); ++r) out.push_back(relay_record(g, alloc, pools, r));
  return out;
}

std::vector<RecordRelay> relay_all_parallel(const NetworkGraph& g, const SegmentAllocation& alloc,
                                            const std::vector<KeyPool>& pools) {
  std::vector<RecordRelay> out(alloc.records.size());
  const auto n = static_cast<std::int64_t>(alloc.records.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] = relay_record(g, alloc, pools, static_cast<std::size_t>(r));
  }
  return out;
}

std::map<NodePair, PairKey> assemble_pair_keys(const SegmentAllocation& alloc,
                                               const std::vector<RecordRelay>& relays) {
  std::map<NodePair, PairKey> keys;
  for (const auto& rr : relays) {
    const NodePair pair = alloc.records.at(rr.record).set.endpoints();
    BitString block_first(alloc.record_bits.at(rr.record));
    BitString block_second(alloc.record_bits.at(rr.record));
    for (const auto& pr : rr.paths) {
      // Paths are oriented from pair.first, so key_at_first is node first's view.
      block_first ^= pr.key_at_first;
      block_second ^= pr.key_at_last;
    }
    auto& key = keys[pair];
    key.pair = pair;
    key.at_first.append(block_first);
    key.at_second.append(block_second);
    ++key.blocks;
  }
  return keys;
}

std::map<NodePair, PairKey> direct_pair_keys(const SegmentAllocation& alloc, const std::vector<KeyPool>& pools) {
  std::map<NodePair, PairKey> keys;
  for (std::size_t k = 0; k < alloc.edges.size(); ++k) {
    const auto& segs = alloc.edges[k];
    const NodePair e = segs.edge;
    keys[e] = PairKey{e, pools[k].copy_at(e.first).slice(segs.effective.offset, segs.effective.length),
                      pools[k].copy_at(e.second).slice(segs.effective.offset, segs.effective.length), 1};
  }
  return keys;
}

std::string to_string(LeakStatus s) {
  switch (s) {
    case LeakStatus::secure: return "secure";
    case LeakStatus::partially_leaked: return "partially_leaked";
    case LeakStatus::fully_leaked: return "fully_leaked";
  }
  return "unknown";
}

bool record_leaks(const MPathSet& set, const std::set<NodeId>& compromised) {
  const NodePair ends = set.endpoints();
  if (compromised.contains(ends.first) || compromised.contains(ends.second)) return true;
  return std::all_of(set.paths().begin(), set.paths().end(), [&](const Path& p) {
    const auto inner = p.interior();
    return std::any_of(inner.begin(), inner.end(), [&](NodeId v) { return compromised.contains(v); });
  });
}

CompromiseReport assess_compromise(const SegmentAllocation& alloc, const std::set<NodeId>& compromised,
                                   std::optional<double> epsilon) {
  CompromiseReport report;
  report.compromised = compromised;
  std::map<NodePair, std::size_t> records_per_pair;
  std::map<NodePair, std::size_t> leaked_per_pair;
  for (std::size_t r = 0; r < alloc.records.size(); ++r) {
    const auto& set = alloc.records[r].set;
    const bool leaked = record_leaks(set, compromised);
    report.record_leaked.push_back(leaked);
    auto& pc = report.pairs[set.endpoints()];
    pc.total_bits += alloc.record_bits[r];
    ++records_per_pair[set.endpoints()];
    if (leaked) {
      pc.leaked_bits += alloc.record_bits[r];
      ++leaked_per_pair[set.endpoints()];
    }
  }
  for (auto& [pair, pc] : report.pairs) {
    const std::size_t leaked = leaked_per_pair[pair];
    if (leaked == 0) {
      pc.status = LeakStatus::secure;
    } else if (leaked == records_per_pair[pair]) {
      pc.status = LeakStatus::fully_leaked;
    } else {
      pc.status = LeakStatus::partially_leaked;
    }
  }
  if (epsilon && !alloc.records.empty()) {
    report.bound = compromise_probability_bound(static_cast<int>(alloc.records.front().set.size()), *epsilon);
  }
  return report;
}

std::optional<BitString> adversary_reconstruct(const NetworkGraph& g, const SegmentAllocation& alloc,
                                               const std::vector<KeyPool>& pools, const RecordRelay& relay,
                                               const std::set<NodeId>& compromised) {
  BitString block(alloc.record_bits.at(relay.record));
  for (const auto& pr : relay.paths) {
    const auto& nodes = pr.path.nodes;
    const std::size_t links = nodes.size() - 1;
    std::vector<std::optional<BitString>> known(links);
    for (std::size_t t = 0; t < links; ++t) {
      const NodeId a = nodes[t];
      const NodeId b = nodes[t + 1];
      const NodeId holder = compromised.contains(a) ? a : (compromised.contains(b) ? b : -1);
      if (holder < 0) continue;
      const Interval& iv = alloc.relay_segment(g, relay.record, NodePair(a, b));
      known[t] = pools[*g.edge_index(a, b)].copy_at(holder).slice(iv.offset, iv.length);
    }
    // messages[t] joins link t and link t + 1.
    for (std::size_t t = 0; t + 1 < links; ++t) {
      if (known[t] && !known[t + 1]) known[t + 1] = *known[t] ^ pr.messages[t];
    }
    for (std::size_t t = links - 1; t-- > 0;) {
      if (known[t + 1] && !known[t]) known[t] = *known[t + 1] ^ pr.messages[t];
    }
    if (!known[0]) return std::nullopt;
    block ^= *known[0];
  }
  return block;
}

double compromise_probability_bound(int m, double epsilon) {
  if (epsilon < 0 || epsilon > 1) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (m < 1) throw std::invalid_argument("M must be >= 1");
  // Raise the shortest decimal form of epsilon, so 0.1^2 is the double 0.01.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, epsilon, std::chars_format::scientific);
  const std::string text(buf, res.ptr);
  const auto e_pos = text.find('e');
  std::string digits = text.substr(0, e_pos);
  std::erase(digits, '.');
  const int exponent = std::stoi(text.substr(e_pos + 1)) - static_cast<int>(digits.size()) + 1;
  std::uint64_t mantissa = std::stoull(digits);
  std::uint64_t power = 1;
  for (int k = 0; k < m; ++k) {
    if (mantissa != 0 && power > UINT64_MAX / mantissa) return std::pow(epsilon, m);
    power *= mantissa;
  }
  const std::string exact = std::to_string(power) + "e" + std::to_string(static_cast<long>(exponent) * m);
  double out = 0;
  std::from_chars(exact.data(), exact.data() + exact.size(), out);
  return out;
}

SimulationResult simulate(const NetworkGraph& g, const RoutingList& list, const SimulationOptions& opts) {
  SimulationResult res;
  res.pools = accumulate_pools(g, opts.tau, opts.seed);
  res.allocation = allocate_segments(g, res.pools, list, effective_from_routing(g, list), opts.tau);
  res.relays = opts.parallel ? relay_all_parallel(g, res.allocation, res.pools)
                             : relay_all_serial(g, res.allocation, res.pools);
  res.remote_keys = assemble_pair_keys(res.allocation, res.relays);
  res.direct_keys = direct_pair_keys(res.allocation, res.pools);
  res.compromise = assess_compromise(res.allocation, opts.compromised, opts.epsilon);

  for (const auto& [pair, key] : res.remote_keys) res.all_keys_agree = res.all_keys_agree && key.agree();
  for (const auto& [pair, key] : res.direct_keys) res.all_keys_agree = res.all_keys_agree && key.agree();

  for (const auto& rr : res.relays) {
    const auto guess = adversary_reconstruct(g, res.allocation, res.pools, rr, opts.compromised);
    const bool leaked = res.compromise.record_leaked[rr.record];
    if (guess.has_value() != leaked) {
      res.oracle_agrees = false;
      continue;
    }
    if (guess) {
      BitString truth(res.allocation.record_bits[rr.record]);
      for (const auto& pr : rr.paths) truth ^= pr.key_at_first;
      if (!(truth == *guess)) res.oracle_agrees = false;
    }
  }
  return res;
}

std::string simulation_report_json(const SimulationResult& r, bool hex_keys) {
  using nlohmann::json;
  json doc;
  doc["tau_s"] = r.allocation.tau;
  doc["all_keys_agree"] = r.all_keys_agree;
  doc["oracle_agrees"] = r.oracle_agrees;
  doc["compromised"] = r.compromise.compromised;
  if (r.compromise.bound) doc["compromise_bound"] = *r.compromise.bound;

  json pairs = json::array();
  auto emit = [&](const PairKey& key, bool remote) {
    json p{{"pair", {key.pair.first, key.pair.second}},
           {"kind", remote ? "remote" : "direct"},
           {"key_bits", key.at_first.size()},
           {"blocks", key.blocks},
           {"endpoints_agree", key.agree()}};
    if (remote) {
      const auto it = r.compromise.pairs.find(key.pair);
      if (it != r.compromise.pairs.end()) {
        p["status"] = to_string(it->second.status);
        p["leaked_bits"] = it->second.leaked_bits;
      }
    } else {
      p["status"] = r.compromise.compromised.contains(key.pair.first) ||
                            r.compromise.compromised.contains(key.pair.second)
                        ? "fully_leaked"
                        : "secure";
    }
    if (hex_keys) p["key_hex"] = key.at_first.to_hex();
    pairs.push_back(std::move(p));
  };
  std::map<NodePair, std::pair<const PairKey*, bool>> all;
  for (const auto& [pair, key] : r.direct_keys) all[pair] = {&key, false};
  for (const auto& [pair, key] : r.remote_keys) all[pair] = {&key, true};
  for (const auto& [pair, entry] : all) emit(*entry.first, entry.second);
  doc["pairs"] = std::move(pairs);

  json links = json::array();
  for (const auto& segs : r.allocation.edges) {
    std::size_t relay_bits = 0;
    for (const auto& [rec, iv] : segs.relay) relay_bits += iv.length;
    links.push_back({{"link", {segs.edge.first, segs.edge.second}},
                     {"pool_bits", segs.pool_bits},
                     {"effective_bits", segs.effective.length},
                     {"relay_segments", segs.relay.size()},
                     {"relay_bits", relay_bits}});
  }
  doc["links"] = std::move(links);
  return doc.dump(2) + "\n";
}

}  // namespace mpath
