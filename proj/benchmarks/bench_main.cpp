#include <fstream>
#include <sstream>

#include <benchmark/benchmark.h>

#include "fairpm/conformance.hpp"
#include "fairpm/enrichment.hpp"
#include "fairpm/fairness.hpp"
#include "fairpm/synthetic.hpp"
#include "fairpm/xes.hpp"

namespace {

using namespace fairpm;

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(FAIRPM_FIXTURES) + "/" + name, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void BM_GrowTree(benchmark::State& state) {
  AnnotatedTable table = generate_random_table({static_cast<std::size_t>(state.range(0)), 6, 1});
  for (auto _ : state) benchmark::DoNotOptimize(grow_tree(table, {2, 20}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GrowTree)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_SelectRelabeling(benchmark::State& state) {
  AnnotatedTable table = generate_random_table({static_cast<std::size_t>(state.range(0)), 6, 2, 0.35});
  DecisionTree tree = grow_tree(table, {2, 20});
  RelabelOptions options{0.05, 1e-3, DiscConstraint::kSigned};
  RelabelProblem problem = make_relabel_problem(tree, table, RelabelMode::kBoth, options);
  for (auto _ : state) benchmark::DoNotOptimize(select_relabeling(problem, options));
  state.counters["candidates"] = static_cast<double>(problem.candidates.size());
}
BENCHMARK(BM_SelectRelabeling)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_TokenReplay(benchmark::State& state) {
  PetriNet net = parse_pnml(read_fixture("block.pnml"));
  EventLog log = generate_synthetic_log({static_cast<std::size_t>(state.range(0)), 3});
  LabelMap labels = default_label_map(net);
  for (auto _ : state) benchmark::DoNotOptimize(replay_log(net, log, labels));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TokenReplay)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ParseXes(benchmark::State& state) {
  std::string text = serialize_xes(generate_synthetic_log({static_cast<std::size_t>(state.range(0)), 4}));
  for (auto _ : state) benchmark::DoNotOptimize(parse_xes(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseXes)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
