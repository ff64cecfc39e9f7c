#include "mpath/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpath/keysim.hpp"
#include "mpath/network_io.hpp"
#include "mpath/routing_io.hpp"

namespace mpath {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw InputError("bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// Command-line overrides on top of the file's router block.
struct RouteOverrides {
  std::optional<double> delta_r_kbps;
  std::optional<std::int64_t> r_max;
  std::optional<std::uint64_t> seed;
  std::optional<int> m;
  std::optional<int> hop_limit;
  bool no_guard = false;

  void apply(RouterConfig& cfg, const RateScale& scale) const {
    if (delta_r_kbps) {
      try {
        cfg.delta_r = scale.from_kbps(*delta_r_kbps);
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--delta-r: ") + e.what());
      }
      if (cfg.delta_r <= Rate(0)) throw InputError("--delta-r must be positive");
    }
    if (r_max) cfg.r_max = *r_max;
    if (seed) cfg.seed = *seed;
    if (m) cfg.m = *m;
    if (hop_limit) cfg.hop_limit = *hop_limit;
    if (no_guard) cfg.strict_guard = false;
  }
};

json config_json(const RouterConfig& cfg, const RateScale& scale) {
  return {{"M", cfg.m},
          {"delta_r_kbps", scale.to_kbps(cfg.delta_r)},
          {"r_max", cfg.r_max ? json(*cfg.r_max) : json(nullptr)},
          {"seed", cfg.seed},
          {"hop_limit", cfg.hop_limit ? json(*cfg.hop_limit) : json(nullptr)},
          {"strict_guard", cfg.strict_guard}};
}

void check_routable(const NetworkGraph& g, const RouterConfig& cfg) {
  const auto report = validate(g, cfg.m);
  if (!report.connected) throw ValidationFailure("network graph is disconnected");
  if (!report.degree_violations.empty()) {
    std::string nodes;
    for (NodeId v : report.degree_violations) nodes += (nodes.empty() ? "" : ",") + std::to_string(v);
    throw ValidationFailure("nodes with degree below M=" + std::to_string(cfg.m) + ": " + nodes);
  }
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& input, std::optional<int> m_override, std::optional<int> hop_limit,
                 std::ostream& out) {
  const auto spec = load_network(input, LoadOptions{.require_connected = false});
  const int m = m_override.value_or(spec.router.m);
  auto report = validate(spec.graph, m);
  if (report.connected) {
    report.remote_pairs_without_m_sets =
        remote_pairs_without_m_sets(spec.graph, m, hop_limit ? hop_limit : spec.router.hop_limit);
  }

  out << "nodes: " << spec.graph.node_count() << "\n";
  out << "links: " << spec.graph.edges().size() << "\n";
  out << "M: " << m << "\n";
  out << "min degree: " << report.min_degree << "\n";
  out << "connected: " << (report.connected ? "yes" : "no") << "\n";
  out << "degree violations:";
  for (NodeId v : report.degree_violations) out << ' ' << v;
  out << (report.degree_violations.empty() ? " none\n" : "\n");
  if (report.connected) {
    out << "remote pairs without M-path sets:";
    for (const auto& p : report.remote_pairs_without_m_sets) out << " (" << p.first << "," << p.second << ")";
    out << (report.remote_pairs_without_m_sets.empty() ? " none\n" : "\n");
  }
  out << (report.ok() ? "OK\n" : "INVALID\n");
  return report.ok() ? kExitOk : kExitValidation;
}

// ------------------------------------------------------------------- route

struct RouteArtifacts {
  std::string routing_text;
  std::string routing_json;
  std::string effective_csv;
  std::string trace_csv;
};

RouteArtifacts render(const RoutingOutcome& o, const RateScale& scale) {
  return {routing_list_text(o.routing_list, scale), routing_list_json(o.routing_list, scale),
          matrix_csv(o.effective, scale), trace_csv(o.trace, scale)};
}

void write_route_dir(const fs::path& dir, const std::string& input, const RouterConfig& cfg, const RateScale& scale,
                     const RoutingOutcome& o) {
  fs::create_directories(dir);
  const auto a = render(o, scale);
  write_file(dir / "routing_list.txt", a.routing_text);
  write_file(dir / "routing_list.json", a.routing_json);
  write_file(dir / "effective_rates.csv", a.effective_csv);
  write_file(dir / "trace.csv", a.trace_csv);
  json manifest{{"tool", "mpath"},
                {"version", kToolVersion},
                {"input", input},
                {"config", config_json(cfg, scale)},
                {"seed", cfg.seed},
                {"artifacts",
                 {{"routing_list", "routing_list.txt"},
                  {"routing_list_json", "routing_list.json"},
                  {"effective_rates", "effective_rates.csv"},
                  {"trace", "trace.csv"}}},
                {"result",
                 {{"iterations", o.iterations},
                  {"final_delta_kbps", scale.to_kbps(o.final_delta)},
                  {"stop_reason", to_string(o.stop_reason)}}}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

struct SweepPoint {
  double delta_r_kbps;
  std::optional<std::uint64_t> seed;
};

std::vector<SweepPoint> parse_sweep(const std::string& text) {
  std::vector<SweepPoint> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    SweepPoint p{};
    const auto colon = item.find(':');
    try {
      p.delta_r_kbps = std::stod(item.substr(0, colon));
      if (colon != std::string::npos) p.seed = std::stoull(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("bad --sweep entry '" + item + "' (expected delta_r[:seed])");
    }
    out.push_back(p);
  }
  if (out.empty()) throw InputError("--sweep needs at least one entry");
  return out;
}

int cmd_route(std::string input, const RouteOverrides& ov, std::string out_dir, const std::string& sweep,
              const std::string& manifest_path, std::ostream& out) {
  std::optional<json> manifest;
  if (!manifest_path.empty()) {
    manifest = json::parse(read_file(manifest_path));
    if (input.empty()) input = manifest->at("input").get<std::string>();
  }
  if (input.empty()) throw InputError("route needs --input or --manifest");
  if (out_dir.empty()) out_dir = ".";

  auto spec = load_network(input, LoadOptions{.require_connected = false});
  const auto& scale = spec.graph.scale();
  RouterConfig cfg = spec.router;
  if (manifest) {
    // Replay the resolved configuration verbatim; explicit flags still win.
    json text = json::parse(serialize_network(spec));
    text["router"] = manifest->at("config");
    cfg = parse_network(text.dump(), LoadOptions{.require_connected = false}).router;
  }
  ov.apply(cfg, scale);
  check_routable(spec.graph, cfg);

  if (!sweep.empty()) {
    const auto points = parse_sweep(sweep);
    std::vector<RouterConfig> configs(points.size(), cfg);
    for (std::size_t k = 0; k < points.size(); ++k) {
      RouteOverrides p;
      p.delta_r_kbps = points[k].delta_r_kbps;
      p.seed = points[k].seed;
      p.apply(configs[k], scale);
    }
    std::vector<RoutingOutcome> outcomes(points.size());
    std::vector<std::string> errors(points.size());
    const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < n; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      try {
        outcomes[idx] = run(spec.graph, spec.targets, configs[idx]);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
    std::ostringstream summary;
    summary << "run,delta_r_kbps,seed,iterations,final_delta_kbps,stop_reason,dir\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (!errors[k].empty()) throw std::runtime_error("sweep run " + std::to_string(k) + ": " + errors[k]);
      const std::string name = "run_" + std::to_string(k);
      write_route_dir(fs::path(out_dir) / name, input, configs[k], scale, outcomes[k]);
      summary << k << ',' << format_number(scale.to_kbps(configs[k].delta_r)) << ',' << configs[k].seed << ','
              << outcomes[k].iterations << ',' << format_number(scale.to_kbps(outcomes[k].final_delta)) << ','
              << to_string(outcomes[k].stop_reason) << ',' << name << '\n';
    }
    write_file(fs::path(out_dir) / "sweep.csv", summary.str());
    out << summary.str();
    return kExitOk;
  }

  const auto outcome = run(spec.graph, spec.targets, cfg);
  write_route_dir(out_dir, input, cfg, scale, outcome);
  out << "iterations: " << outcome.iterations << "\n";
  out << "final delta: " << format_number(scale.to_kbps(outcome.final_delta)) << " kbit/s\n";
  out << "stop reason: " << to_string(outcome.stop_reason) << "\n";
  out << "records: " << outcome.routing_list.size() << "\n";
  out << routing_list_text(outcome.routing_list, scale);
  return kExitOk;
}

// ------------------------------------------------------------------- paths

int cmd_paths(const std::string& input, const std::string& pair_text, std::optional<int> m_override,
              std::optional<int> hop_limit, std::ostream& out) {
  const auto spec = load_network(input);
  const auto ends = parse_int_list(pair_text);
  if (ends.size() != 2) throw InputError("--pair expects two node ids, e.g. --pair 1,3");
  const auto& g = spec.graph;
  if (!g.contains(ends[0]) || !g.contains(ends[1]) || ends[0] == ends[1]) {
    throw InputError("--pair must name two distinct nodes of the network");
  }
  const int m = m_override.value_or(spec.router.m);
  const auto limit = hop_limit ? hop_limit : spec.router.hop_limit;
  const auto paths = enumerate_simple_paths(g, ends[0], ends[1], limit);
  const auto sets = enumerate_m_path_sets(paths, m);
  const auto eff = initial_effective_rates(g);
  const DeficiencyView d{&spec.targets, &eff};
  const NodePair pair(ends[0], ends[1]);

  out << "pair (" << pair.first << "," << pair.second << "), M=" << m << "\n";
  out << "simple paths: " << paths.size() << "\n";
  for (const auto& p : paths) out << "  " << to_string(p) << "  hops=" << p.hops() << "\n";
  if (sets.empty()) {
    out << "no set of " << m << " non-overlapping paths exists for this pair\n";
    return kExitOk;
  }
  out << "M-path sets: " << sets.size() << "\n";
  for (const auto& s : sets) {
    out << "  " << to_string(s) << ",  D=" << format_number(g.scale().to_kbps(set_deficiency(s, d)))
        << "  distance=" << s.total_hops() << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& input, std::string routing_path, const std::string& out_dir, double tau,
                 std::uint64_t seed, const std::string& compromise, std::optional<double> epsilon, bool hex,
                 std::ostream& out, std::ostream& err) {
  const auto spec = load_network(input);
  const auto& g = spec.graph;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  if (routing_path.empty()) routing_path = (dir / "routing_list.json").string();
  const auto list = parse_routing_list(read_file(routing_path), g);

  SimulationOptions opts;
  opts.tau = tau;
  opts.seed = seed;
  opts.epsilon = epsilon;
  for (int v : parse_int_list(compromise)) {
    if (!g.contains(v)) throw InputError("--compromise names unknown node " + std::to_string(v));
    opts.compromised.insert(v);
  }

  for (const auto& e : g.edges()) {
    if (!whole_bits(e.rate, g.scale(), tau)) {
      err << "warning: link (" << e.nodes.first << "," << e.nodes.second
          << ") rate times tau is not a whole number of bits; lengths are rounded down\n";
    }
  }
  for (const auto& [set, rate] : list.records()) {
    if (!whole_bits(rate, g.scale(), tau)) {
      err << "warning: record " << to_string(set) << " rate times tau is not a whole number of bits\n";
    }
  }

  const auto result = simulate(g, list, opts);
  fs::create_directories(dir);
  write_file(dir / "simulation_report.json", simulation_report_json(result, hex));

  std::size_t agree = 0;
  const std::size_t total = result.remote_keys.size() + result.direct_keys.size();
  for (const auto& [p, k] : result.remote_keys) agree += k.agree();
  for (const auto& [p, k] : result.direct_keys) agree += k.agree();
  out << "pairs with matching keys: " << agree << "/" << total << "\n";
  for (const auto& [pair, key] : result.remote_keys) {
    const auto& pc = result.compromise.pairs.at(pair);
    out << "  (" << pair.first << "," << pair.second << ") bits=" << key.at_first.size() << " blocks=" << key.blocks
        << " " << (key.agree() ? "match" : "MISMATCH") << " " << to_string(pc.status);
    if (pc.leaked_bits) out << " leaked_bits=" << pc.leaked_bits;
    out << "\n";
  }
  if (result.compromise.bound) out << "compromise bound: " << format_number(*result.compromise.bound) << "\n";
  out << "adversary oracle agrees with leak rule: " << (result.oracle_agrees ? "yes" : "NO") << "\n";
  return result.all_keys_agree && result.oracle_agrees ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-path key routing for trusted-node QKD networks", "mpath"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string input;
  std::string out_dir;
  std::optional<int> m;
  std::optional<int> hop_limit;

  auto* validate_cmd = app.add_subcommand("validate", "Check degrees, connectivity and M-path availability");
  validate_cmd->add_option("--input", input, "Network description (JSON)")->required();
  validate_cmd->add_option("--m", m, "Number of non-overlapping paths");
  validate_cmd->add_option("--hop-limit", hop_limit, "Maximum path length in hops");

  RouteOverrides ov;
  std::string sweep;
  std::string manifest;
  auto* route_cmd = app.add_subcommand("route", "Run the routing algorithm and write its artifacts");
  route_cmd->add_option("--input", input, "Network description (JSON)");
  route_cmd->add_option("--delta-r", ov.delta_r_kbps, "Rate step in kbit/s");
  route_cmd->add_option("--r-max", ov.r_max, "Maximum number of iterations");
  route_cmd->add_option("--seed", ov.seed, "Seed for random tie-breaks");
  route_cmd->add_option("--m", ov.m, "Number of non-overlapping paths");
  route_cmd->add_option("--hop-limit", ov.hop_limit, "Maximum path length in hops");
  route_cmd->add_flag("--no-guard", ov.no_guard, "Allow links to be driven below zero effective rate");
  route_cmd->add_option("--out-dir", out_dir, "Directory for artifacts");
  route_cmd->add_option("--sweep", sweep, "Comma-separated delta_r[:seed] runs executed concurrently");
  route_cmd->add_option("--manifest", manifest, "Re-run the configuration recorded in a manifest");

  std::string pair;
  auto* paths_cmd = app.add_subcommand("paths", "List simple paths and M-path sets for a node pair");
  paths_cmd->add_option("--input", input, "Network description (JSON)")->required();
  paths_cmd->add_option("--pair", pair, "Node pair, e.g. 1,3")->required();
  paths_cmd->add_option("--m", m, "Number of non-overlapping paths");
  paths_cmd->add_option("--hop-limit", hop_limit, "Maximum path length in hops");

  std::string routing;
  double tau = 1.0;
  std::uint64_t sim_seed = 0;
  std::string compromise;
  std::optional<double> epsilon;
  bool hex = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate key relay for a routing list");
  sim_cmd->add_option("--input", input, "Network description (JSON)")->required();
  sim_cmd->add_option("--out-dir", out_dir, "Directory holding routing artifacts; report is written here");
  sim_cmd->add_option("--routing", routing, "Routing list JSON (default <out-dir>/routing_list.json)");
  sim_cmd->add_option("--tau", tau, "Accumulation period in seconds")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_seed, "Seed for simulated key material");
  sim_cmd->add_option("--compromise", compromise, "Comma-separated compromised nodes");
  sim_cmd->add_option("--epsilon", epsilon, "Per-node compromise probability")->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_flag("--hex", hex, "Include keys as hex in the report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitRuntime;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(input, m, hop_limit, out);
    if (route_cmd->parsed()) return cmd_route(input, ov, out_dir, sweep, manifest, out);
    if (paths_cmd->parsed()) return cmd_paths(input, pair, m, hop_limit, out);
    if (sim_cmd->parsed()) {
      return cmd_simulate(input, routing, out_dir, tau, sim_seed, compromise, epsilon, hex, out, err);
    }
  } catch (const ValidationFailure& e) {
    err << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace mpath
