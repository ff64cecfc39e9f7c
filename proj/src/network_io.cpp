#include "mpath/network_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mpath {

using json = nlohmann::json;

namespace {

Rate convert(const RateScale& scale, const json& value, const std::string& what) {
  if (!value.is_number()) {
    throw InputError(what + " must be a number");
  }
  try {
    return scale.from_kbps(value.get<double>());
  } catch (const std::invalid_argument& e) {
    throw InputError(what + ": " + e.what());
  }
}

int get_int(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw InputError(std::string("field '") + key + "' must be an integer");
  }
  return it->get<int>();
}

RouterConfig parse_router(const json& j, const RateScale& scale) {
  RouterConfig cfg;
  cfg.delta_r = scale.from_kbps(0.1);
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw InputError("'router' must be an object");

  if (j.contains("M")) cfg.m = get_int(j, "M");
  if (cfg.m < 1) throw InputError("router.M must be >= 1");
  if (j.contains("delta_r_kbps")) cfg.delta_r = convert(scale, j["delta_r_kbps"], "router.delta_r_kbps");
  if (cfg.delta_r <= Rate(0)) throw InputError("router.delta_r_kbps must be positive");
  if (j.contains("r_max") && !j["r_max"].is_null()) {
    if (!j["r_max"].is_number_integer() || j["r_max"].get<std::int64_t>() < 0) {
      throw InputError("router.r_max must be a non-negative integer or null");
    }
    cfg.r_max = j["r_max"].get<std::int64_t>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw InputError("router.seed must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("hop_limit") && !j["hop_limit"].is_null()) {
    cfg.hop_limit = get_int(j, "hop_limit");
    if (*cfg.hop_limit < 1) throw InputError("router.hop_limit must be >= 1");
  }
  if (j.contains("strict_guard")) {
    if (!j["strict_guard"].is_boolean()) throw InputError("router.strict_guard must be a boolean");
    cfg.strict_guard = j["strict_guard"].get<bool>();
  }
  return cfg;
}

}  // namespace

NetworkSpec parse_network(const std::string& text, LoadOptions opts) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("network description must be a JSON object");

  RateScale scale;
  if (doc.contains("resolution_bps")) {
    if (!doc["resolution_bps"].is_number() || !(doc["resolution_bps"].get<double>() > 0)) {
      throw InputError("resolution_bps must be a positive number");
    }
    scale.bits_per_unit = doc["resolution_bps"].get<double>();
  }

  const int n = get_int(doc, "nodes");
  if (n < 2) throw InputError("'nodes' must be >= 2");

  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw InputError("'edges' must be an array");
  }
  std::vector<Edge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_object()) throw InputError("edge entries must be objects");
    const int u = get_int(e, "u");
    const int v = get_int(e, "v");
    if (!e.contains("rate_kbps")) throw InputError("edge is missing 'rate_kbps'");
    const std::string where = "edge (" + std::to_string(u) + "," + std::to_string(v) + ") rate";
    const Rate r = convert(scale, e["rate_kbps"], where);
    if (r < Rate(0)) throw InputError(where + " is negative");
    edges.push_back({NodePair(u, v), r});
    if (u == v) throw InputError("self-loop at node " + std::to_string(u));
  }

  NetworkSpec spec;
  spec.graph = NetworkGraph(n, std::move(edges), scale);

  const json target = doc.value("target", json(0.0));
  if (target.is_number()) {
    const Rate t = convert(scale, target, "target");
    if (t < Rate(0)) throw InputError("target is negative");
    spec.targets = uniform_targets(n, t);
    spec.uniform_target = true;
  } else if (target.is_array()) {
    if (static_cast<int>(target.size()) != n) throw InputError("target matrix must have N rows");
    TargetMatrix t(n);
    for (int i = 0; i < n; ++i) {
      const auto& row = target[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw InputError("target matrix must be N x N");
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Rate a = convert(scale, target[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], "target");
        const Rate b = convert(scale, target[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)], "target");
        if (a != b) {
          throw InputError("asymmetric target for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        t.set(i, j, a);
      }
    }
    check_targets(t);
    spec.targets = std::move(t);
  } else {
    throw InputError("'target' must be a number or an N x N matrix");
  }

  spec.router = parse_router(doc.value("router", json()), scale);

  if (opts.require_connected && !spec.graph.connected()) {
    throw InputError("network graph is disconnected");
  }
  return spec;
}

NetworkSpec load_network(const std::filesystem::path& file, LoadOptions opts) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str(), opts);
}

std::string serialize_network(const NetworkSpec& spec) {
  const auto& g = spec.graph;
  const auto& scale = g.scale();
  json doc;
  doc["nodes"] = g.node_count();
  doc["resolution_bps"] = scale.bits_per_unit;
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) {
    doc["edges"].push_back({{"u", e.nodes.first}, {"v", e.nodes.second}, {"rate_kbps", scale.to_kbps(e.rate)}});
  }
  if (spec.uniform_target) {
    doc["target"] = scale.to_kbps(g.node_count() > 1 ? spec.targets(0, 1) : Rate(0));
  } else {
    json rows = json::array();
    for (int i = 0; i < g.node_count(); ++i) {
      json row = json::array();
      for (int j = 0; j < g.node_count(); ++j) row.push_back(scale.to_kbps(spec.targets(i, j)));
      rows.push_back(std::move(row));
    }
    doc["target"] = std::move(rows);
  }
  const auto& r = spec.router;
  doc["router"] = {
      {"M", r.m},
      {"delta_r_kbps", scale.to_kbps(r.delta_r)},
      {"r_max", r.r_max ? json(*r.r_max) : json(nullptr)},
      {"seed", r.seed},
      {"hop_limit", r.hop_limit ? json(*r.hop_limit) : json(nullptr)},
      {"strict_guard", r.strict_guard},
  };
  return doc.dump(2) + "\n";
}

}  // namespace mpath
