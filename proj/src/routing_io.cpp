#include "mpath/routing_io.hpp"

#include <sstream>

#include "json.hpp"

namespace mpath {

using json = nlohmann::json;

std::string routing_list_text(const RoutingList& list, const RateScale& scale) {
  std::string out;
  for (const auto& [set, rate] : list.records()) {
    out += to_string(set) + ": " + format_number(scale.to_kbps(rate)) + "\n";
  }
  return out;
}

std::string routing_list_json(const RoutingList& list, const RateScale& scale) {
  json doc;
  doc["resolution_bps"] = scale.bits_per_unit;
  doc["records"] = json::array();
  for (const auto& [set, rate] : list.records()) {
    json paths = json::array();
    for (const auto& p : set.paths()) paths.push_back(p.nodes);
    doc["records"].push_back({{"pair", {set.endpoints().first, set.endpoints().second}},
                              {"paths", std::move(paths)},
                              {"rate_units", rate.units()},
                              {"rate_kbps", scale.to_kbps(rate)}});
  }
  return doc.dump(2) + "\n";
}

RoutingList parse_routing_list(const std::string& text, const NetworkGraph& g) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("routing list parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array()) {
    throw InputError("routing list must be an object with a 'records' array");
  }
  if (doc.contains("resolution_bps") && doc["resolution_bps"].get<double>() != g.scale().bits_per_unit) {
    throw InputError("routing list resolution does not match the network");
  }
  RoutingList list;
  for (const auto& rec : doc["records"]) {
    if (!rec.contains("paths") || !rec.contains("rate_units")) {
      throw InputError("routing record needs 'paths' and 'rate_units'");
    }
    std::vector<Path> paths;
    for (const auto& p : rec["paths"]) {
      Path path{p.get<std::vector<NodeId>>()};
      for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
        if (!g.adjacent(path.nodes[k], path.nodes[k + 1])) {
          throw InputError("routing path " + to_string(path) + " uses a missing link");
        }
      }
      paths.push_back(std::move(path));
    }
    const Rate rate(rec["rate_units"].get<std::int64_t>());
    if (rate <= Rate(0)) throw InputError("routing record rate must be positive");
    try {
      list.add(MPathSet(std::move(paths)), rate);
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("invalid routing record: ") + e.what());
    }
  }
  return list;
}

std::string trace_csv(const std::vector<IterationTrace>& trace, const RateScale& scale) {
  std::ostringstream out;
  out << "r,i,j,pairs_tied,candidates_tied,chosen_set,delta_before_kbps,delta_after_kbps,accepted,stop_reason\n";
  for (const auto& t : trace) {
    out << t.r << ',' << t.selected_pair.first << ',' << t.selected_pair.second << ',' << t.pairs_tied << ','
        << t.candidates_tied << ",\"" << (t.chosen_set ? to_string(*t.chosen_set) : std::string()) << "\","
        << format_number(scale.to_kbps(t.delta_before)) << ',' << format_number(scale.to_kbps(t.delta_after)) << ','
        << (t.accepted ? 1 : 0) << ',' << (t.stop_reason ? to_string(*t.stop_reason) : std::string()) << '\n';
  }
  return out.str();
}

std::string matrix_csv(const PairMatrix<Rate>& m, const RateScale& scale) {
  std::ostringstream out;
  out << "node";
  for (int j = 0; j < m.size(); ++j) out << ',' << j;
  out << '\n';
  for (int i = 0; i < m.size(); ++i) {
    out << i;
    for (int j = 0; j < m.size(); ++j) out << ',' << format_number(scale.to_kbps(m(i, j)));
    out << '\n';
  }
  return out.str();
}

std::vector<std::vector<double>> parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');  // row label
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mpath
