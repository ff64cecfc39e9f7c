#include <benchmark/benchmark.h>

#include "mpath/keysim.hpp"
#include "mpath/network_io.hpp"
#include "mpath/routing.hpp"

using namespace mpath;

namespace {

NetworkGraph complete_graph(int n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) edges.push_back({NodePair(i, j), Rate(1000 + 37 * i + 11 * j)});
  }
  return NetworkGraph(n, std::move(edges));
}

struct ScoringFixture {
  NetworkGraph g = complete_graph(8);
  TargetMatrix t = uniform_targets(8, Rate(500));
  EffectiveRateMatrix eff = initial_effective_rates(g);
  std::vector<MPathSet> sets = enumerate_m_path_sets(enumerate_simple_paths(g, 0, 7), 3);
  CandidateTable table = CandidateTable::build(sets);
  std::vector<CandidateScore> out = std::vector<CandidateScore>(table.size());
};

ScoringFixture& scoring() {
  static ScoringFixture f;
  return f;
}

template <auto Kernel>
void BM_Score(benchmark::State& state) {
  auto& f = scoring();
  const DeficiencyView d{&f.t, &f.eff};
  for (auto _ : state) {
    Kernel(f.table, d, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.table.size()));
}
BENCHMARK(BM_Score<score_candidates_serial>)->Name("score_candidates/serial");
BENCHMARK(BM_Score<score_candidates_parallel>)->Name("score_candidates/parallel");

template <auto Kernel>
void BM_CostDelta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TargetMatrix t = uniform_targets(n, Rate(300));
  EffectiveRateMatrix eff(n);
  Rng rng(1);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) eff.set(NodePair(i, j), Rate(static_cast<std::int64_t>(rng.uniform_index(1000))));
  }
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(t, eff));
  state.SetItemsProcessed(state.iterations() * n * (n - 1) / 2);
}
BENCHMARK(BM_CostDelta<cost_delta_serial>)->Name("cost_delta/serial")->Arg(64)->Arg(512);
BENCHMARK(BM_CostDelta<cost_delta_parallel>)->Name("cost_delta/parallel")->Arg(64)->Arg(512);

struct RelayFixture {
  NetworkSpec spec = load_network(MPATH_DATA_DIR "/six_node.json");
  double tau = 1000.0;
  std::vector<KeyPool> pools;
  SegmentAllocation alloc;

  RelayFixture() {
    const auto out = run(spec.graph, spec.targets, spec.router);
    pools = accumulate_pools(spec.graph, tau, 3);
    alloc = allocate_segments(spec.graph, pools, out.routing_list, out.effective, tau);
  }
};

RelayFixture& relay() {
  static RelayFixture f;
  return f;
}

template <auto Kernel>
void BM_Relay(benchmark::State& state) {
  auto& f = relay();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.spec.graph, f.alloc, f.pools));
}
BENCHMARK(BM_Relay<relay_all_serial>)->Name("relay_all/serial");
BENCHMARK(BM_Relay<relay_all_parallel>)->Name("relay_all/parallel");

}  // namespace

BENCHMARK_MAIN();
