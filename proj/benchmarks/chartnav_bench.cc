#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "chartnav/data_table.h"
#include "chartnav/description.h"
#include "chartnav/navigation.h"
#include "chartnav/spec_model.h"
#include "chartnav/structure.h"

namespace {

using namespace chartnav;

const char* kScatter = R"({"mark":"point","encoding":{
  "x":{"field":"a","type":"quantitative"},
  "y":{"field":"b","type":"quantitative"},
  "color":{"field":"c","type":"nominal"}}})";

std::string ScatterCsv(std::size_t rows) {
  std::mt19937_64 rng(rows);
  std::uniform_real_distribution<double> value(0, 1000);
  std::uniform_int_distribution<int> category(0, 7);
  std::ostringstream out;
  out << "a,b,c\n";
  for (std::size_t i = 0; i < rows; ++i) {
    out << value(rng) << "," << value(rng) << ",c" << category(rng) << "\n";
  }
  return out.str();
}

std::shared_ptr<const AccessStructure> Build(std::size_t rows, Variant variant) {
  auto spec = std::make_shared<const ChartSpec>(ParseChartSpec(kScatter));
  auto data = std::make_shared<const DataTable>(LoadData(ScatterCsv(rows), DataFormat::kDelimited));
  StructureConfig config;
  config.variant = variant;
  return BuildStructure(spec, data, config);
}

void BM_LoadData(benchmark::State& state) {
  std::string csv = ScatterCsv(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(LoadData(csv, DataFormat::kDelimited));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LoadData)->Arg(500)->Arg(5000)->Arg(50000);

void BM_BuildEncodingTree(benchmark::State& state) {
  auto spec = std::make_shared<const ChartSpec>(ParseChartSpec(kScatter));
  auto data = std::make_shared<const DataTable>(
      LoadData(ScatterCsv(static_cast<std::size_t>(state.range(0))), DataFormat::kDelimited));
  for (auto _ : state) benchmark::DoNotOptimize(BuildStructure(spec, data, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildEncodingTree)->Arg(500)->Arg(5000)->Arg(50000);

void BM_BuildBinaryTree(benchmark::State& state) {
  auto spec = std::make_shared<const ChartSpec>(ParseChartSpec(kScatter));
  auto data = std::make_shared<const DataTable>(
      LoadData(ScatterCsv(static_cast<std::size_t>(state.range(0))), DataFormat::kDelimited));
  StructureConfig config;
  config.variant = Variant::kBinaryTree;
  for (auto _ : state) benchmark::DoNotOptimize(BuildStructure(spec, data, config));
}
BENCHMARK(BM_BuildBinaryTree)->Arg(500)->Arg(5000);

// Random walk over the tree, describing every stop.
void BM_NavigateAndDescribe(benchmark::State& state) {
  auto s = Build(static_cast<std::size_t>(state.range(0)), Variant::kEncodingTree);
  SessionState session = CreateSession(s);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> verb(0, static_cast<int>(Verb::kSpatialRight));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ApplyCommand(session, {static_cast<Verb>(verb(rng)), std::nullopt}));
    if (session.command_log.size() > 4096) session.command_log.clear();
  }
}
BENCHMARK(BM_NavigateAndDescribe)->Arg(500)->Arg(5000);

void BM_SpatialNeighbor(benchmark::State& state) {
  auto s = Build(static_cast<std::size_t>(state.range(0)), Variant::kEncodingTree);
  std::vector<NodeIndex> leaves;
  for (NodeIndex i = 0; i < s->size(); ++i) {
    if (s->node(i).kind == NodeKind::kDatumLeaf) leaves.push_back(i);
  }
  std::size_t at = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SpatialNeighbor(*s, leaves[at], Direction::kUp));
    at = (at + 1) % leaves.size();
  }
}
BENCHMARK(BM_SpatialNeighbor)->Arg(500)->Arg(5000);

void BM_DumpStructure(benchmark::State& state) {
  auto s = Build(static_cast<std::size_t>(state.range(0)), Variant::kEncodingTree);
  for (auto _ : state) benchmark::DoNotOptimize(DumpStructure(*s));
}
BENCHMARK(BM_DumpStructure)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
