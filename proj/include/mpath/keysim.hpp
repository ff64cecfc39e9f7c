#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpath/bits.hpp"
#include "mpath/routing.hpp"

namespace mpath {

/// Allocation needs more key than a link's pool holds.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(NodePair edge, const std::string& what) : std::runtime_error(what), edge_(edge) {}
  NodePair edge() const { return edge_; }

 private:
  NodePair edge_;
};

/// floor(rate * tau) in bits.
std::size_t key_bits(Rate r, const RateScale& scale, double tau);
/// Whether rate * tau is a whole number of bits.
bool whole_bits(Rate r, const RateScale& scale, double tau);

/// Key material accumulated on one link; each endpoint holds its own copy.
struct KeyPool {
  NodePair edge;
  BitString at_first;
  BitString at_second;

  /// The copy held by node `n`, which must be an endpoint of the link.
  const BitString& copy_at(NodeId n) const;
  BitString& copy_at(NodeId n);
  std::size_t size() const { return at_first.size(); }
};

/// One pool per edge, in g.edges() order, of floor(R_ij * tau) uniform bits.
/// Each link draws from its own fork of `seed`.
std::vector<KeyPool> accumulate_pools(const NetworkGraph& g, double tau, std::uint64_t seed);

struct Interval {
  std::size_t offset = 0;
  std::size_t length = 0;

  bool operator==(const Interval&) const = default;
};

/// Partition of one link's pool.
struct EdgeSegments {
  NodePair edge;
  std::size_t pool_bits = 0;
  Interval effective;
  /// record index -> relay segment
  std::map<std::size_t, Interval> relay;
};

/// How every pool is carved: the effective segment first, then one relay
/// segment per record crossing the link, records in canonical order.
struct SegmentAllocation {
  double tau = 0;
  std::vector<RoutingRecord> records;
  std::vector<std::size_t> record_bits;
  std::vector<EdgeSegments> edges;  // g.edges() order

  /// Throws std::out_of_range if `record` has no segment on `link`.
  const Interval& relay_segment(const NetworkGraph& g, std::size_t record, NodePair link) const;
};

/// Throws CapacityError naming the first link whose pool cannot hold its
/// effective segment plus all relay segments.
SegmentAllocation allocate_segments(const NetworkGraph& g, const std::vector<KeyPool>& pools,
                                    const RoutingList& list, const EffectiveRateMatrix& eff, double tau);

/// Public relay messages of one path plus what each endpoint derives.
///
/// The path key is the first link's segment. Interior node k publishes
/// seg(prev, k) XOR seg(k, next); the far endpoint peels the messages off
/// its own last-link segment in reverse order.
struct PathRelay {
  Path path;
  BitString key_at_first;
  BitString key_at_last;
  std::vector<NodeId> publishers;  // interior nodes, in path order
  std::vector<BitString> messages;
};

struct RecordRelay {
  std::size_t record = 0;
  std::vector<PathRelay> paths;
};

PathRelay relay_path_key(const NetworkGraph& g, const Path& path, const SegmentAllocation& alloc,
                         std::size_t record, const std::vector<KeyPool>& pools);

/// relay_path_key for every member of every record.
std::vector<RecordRelay> relay_all_serial(const NetworkGraph& g, const SegmentAllocation& alloc,
                                          const std::vector<KeyPool>& pools);
/// Records relayed concurrently with OpenMP; identical output.
std::vector<RecordRelay> relay_all_parallel(const NetworkGraph& g, const SegmentAllocation& alloc,
                                            const std::vector<KeyPool>& pools);

struct PairKey {
  NodePair pair;
  BitString at_first;
  BitString at_second;
  /// Number of concatenated blocks (records) for remote pairs.
  std::size_t blocks = 0;

  bool agree() const { return at_first == at_second; }
};

/// Remote-pair keys: per record the XOR of its path keys, concatenated in
/// record order, built separately from each endpoint's view.
std::map<NodePair, PairKey> assemble_pair_keys(const SegmentAllocation& alloc,
                                               const std::vector<RecordRelay>& relays);

/// Directly linked pairs use their effective segment as is.
std::map<NodePair, PairKey> direct_pair_keys(const SegmentAllocation& alloc, const std::vector<KeyPool>& pools);

enum class LeakStatus { secure, partially_leaked, fully_leaked };
std::string to_string(LeakStatus s);

struct PairCompromise {
  LeakStatus status = LeakStatus::secure;
  std::size_t leaked_bits = 0;
  std::size_t total_bits = 0;
};

struct CompromiseReport {
  std::set<NodeId> compromised;
  std::vector<bool> record_leaked;  // per allocation record
  std::map<NodePair, PairCompromise> pairs;
  std::optional<double> bound;
};

/// Structural leak rule. A record leaks when every member path has a
/// compromised interior node; a compromised endpoint leaks every record of
/// its pairs, since it holds the key outright.
bool record_leaks(const MPathSet& set, const std::set<NodeId>& compromised);

CompromiseReport assess_compromise(const SegmentAllocation& alloc, const std::set<NodeId>& compromised,
                                   std::optional<double> epsilon = std::nullopt);

/// What a coalition of compromised nodes can compute on its own: the pool
/// copies of every link touching a compromised node, the public allocation
/// and all relay transcripts. Returns the record's XOR block if those
/// determine it, nullopt otherwise.
std::optional<BitString> adversary_reconstruct(const NetworkGraph& g, const SegmentAllocation& alloc,
                                               const std::vector<KeyPool>& pools, const RecordRelay& relay,
                                               const std::set<NodeId>& compromised);

/// Upper bound eps^M on compromising a remote pair's key.
double compromise_probability_bound(int m, double epsilon);

struct SimulationOptions {
  double tau = 1.0;
  std::uint64_t seed = 0;
  std::set<NodeId> compromised;
  std::optional<double> epsilon;
  bool parallel = true;
};

struct SimulationResult {
  std::vector<KeyPool> pools;
  SegmentAllocation allocation;
  std::vector<RecordRelay> relays;
  std::map<NodePair, PairKey> remote_keys;
  std::map<NodePair, PairKey> direct_keys;
  CompromiseReport compromise;
  /// Per record: adversary_reconstruct succeeded exactly when the structural
  /// rule says leaked, and any reconstruction equals the true block.
  bool oracle_agrees = true;
  bool all_keys_agree = true;
};

SimulationResult simulate(const NetworkGraph& g, const RoutingList& list, const SimulationOptions& opts);

/// JSON summary: per-pair key lengths, agreement and compromise status.
std::string simulation_report_json(const SimulationResult& r, bool hex_keys);

}  // namespace mpath
