#include <benchmark/benchmark.h>

#include "pcl/countermodel.hpp"
#include "pcl/search.hpp"
#include "pcl/semantics.hpp"

using namespace pcl;

namespace {

struct Case {
  const char* logic;
  const char* formula;
};

// Axioms and derived theorems, then a refutation.
const Case kCases[] = {
    {"PCL", "p > p"},
    {"PCL", "(p > q) & (p > r) -> (p & q) > r"},
    {"PCL", "(p > r) & (q > r) -> (p | q) > r"},
    {"PCL", "((p | q) > p) & ((q | r) > q) -> (p | r) > p"},
    {"PN", "~(true > false)"},
    {"PC", "p & q -> p > q"},
    {"PU", "(~p > false) -> ~(~p > false) > false"},
    {"PCL", "(p > q) -> (p & r) > q"},
};

void BM_Prove(benchmark::State& state) {
  const Case& c = kCases[state.range(0)];
  const Logic logic = *logic_from_name(c.logic);
  const Formula f = parse_formula(c.formula);
  std::size_t nodes = 0;
  for (auto _ : state) {
    auto o = prove(f, logic);
    nodes = o.stats.nodes;
    benchmark::DoNotOptimize(o.verdict);
  }
  state.SetLabel(std::string(c.logic) + " " + c.formula);
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_Prove)->DenseRange(0, std::size(kCases) - 1)->Unit(benchmark::kMillisecond);

void BM_ExtractModel(benchmark::State& state) {
  const Formula f = parse_formula("(p > q) & (q > r) -> p > r");
  const auto o = prove(f, Logic::pcl());
  for (auto _ : state) benchmark::DoNotOptimize(extract_model(*o.leaf, Logic::pcl()).model.size());
}
BENCHMARK(BM_ExtractModel);

void BM_Enumerate(benchmark::State& state) {
  const Formula f = parse_formula("(p > q) -> (p & r) > q");
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_countermodel(f, Logic::pcl(), state.range(0)).has_value());
}
BENCHMARK(BM_Enumerate)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
