#pragma once

#include <string>

#include "mpath/routing.hpp"

namespace mpath {

/// One line per record, e.g. "{(0, 1, 2), (0, 3, 2)}: 0.1" (rates in kbit/s).
std::string routing_list_text(const RoutingList& list, const RateScale& scale);

/// Machine-readable routing list:
///
///     {"resolution_bps": 1, "M": 2,
///      "records": [{"pair": [0, 2], "paths": [[0,1,2],[0,3,2]],
///                   "rate_units": 100, "rate_kbps": 0.1}, ...]}
std::string routing_list_json(const RoutingList& list, const RateScale& scale);

/// Parses routing_list_json output and checks it against `g`: every path
/// must use existing links and every record must be a valid M-path set.
/// Throws InputError otherwise.
RoutingList parse_routing_list(const std::string& text, const NetworkGraph& g);

/// Header "r,i,j,pairs_tied,candidates_tied,chosen_set,delta_before_kbps,
/// delta_after_kbps,accepted,stop_reason", one row per trace entry.
std::string trace_csv(const std::vector<IterationTrace>& trace, const RateScale& scale);

/// N x N matrix in kbit/s with a header row and column of node ids.
std::string matrix_csv(const PairMatrix<Rate>& m, const RateScale& scale);

/// Reads matrix_csv output back into kbit/s values.
std::vector<std::vector<double>> parse_matrix_csv(const std::string& text);

}  // namespace mpath
