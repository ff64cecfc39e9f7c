#pragma once

#include <filesystem>
#include <string>

#include "mpath/config.hpp"
#include "mpath/network.hpp"

namespace mpath {

/// Contents of a network description file.
///
/// JSON layout:
///
///     {
///       "nodes": 5,
///       "resolution_bps": 1,                      // optional, default 1
///       "edges": [{"u": 0, "v": 1, "rate_kbps": 0.5}, ...],
///       "target": 0.2,                            // or an N x N matrix
///       "router": {"M": 2, "delta_r_kbps": 0.1, "r_max": null,
///                  "seed": 0, "hop_limit": null, "strict_guard": true}
///     }
///
/// All rates are kbit/s and are converted to exact integer units of
/// `resolution_bps`.
struct NetworkSpec {
  NetworkGraph graph;
  TargetMatrix targets;
  RouterConfig router;
  /// True when the file gave `target` as a scalar.
  bool uniform_target = false;

  bool operator==(const NetworkSpec&) const = default;
};

struct LoadOptions {
  bool require_connected = true;
};

/// Parses a network description. Throws InputError on malformed JSON or a
/// schema violation.
NetworkSpec parse_network(const std::string& text, LoadOptions opts = {});
NetworkSpec load_network(const std::filesystem::path& file, LoadOptions opts = {});

/// Inverse of parse_network; parse_network(serialize_network(s)) == s.
std::string serialize_network(const NetworkSpec& spec);

}  // namespace mpath
