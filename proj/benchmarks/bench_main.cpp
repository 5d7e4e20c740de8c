#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "stackres/commerce.hpp"
#include "stackres/expansion.hpp"
#include "stackres/gametext.hpp"
#include "stackres/harness.hpp"
#include "stackres/inducible.hpp"
#include "stackres/resilience.hpp"

namespace {

using namespace stackres;

GameDocument corpus(const std::string& name) {
  std::ifstream f(std::string(STACKRES_CORPUS_DIR) + "/" + name);
  std::stringstream s;
  s << f.rdbuf();
  return parse_game(s.str(), name);
}

GameDocument random_game(std::size_t players, std::size_t leaves, std::uint64_t seed) {
  GeneratorConfig config;
  config.players = players;
  config.max_depth = 8;
  config.max_leaves = leaves;
  config.internal_probability = 1.0;
  config.seed = seed;
  return generate(config);
}

void BM_Spe(benchmark::State& state) {
  const auto doc = random_game(3, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(spe(doc.tree));
  state.counters["nodes"] = static_cast<double>(doc.tree.size());
}
BENCHMARK(BM_Spe)->Arg(16)->Arg(64)->Arg(256);

void BM_ParseSerialize(benchmark::State& state) {
  const std::string text = serialize(random_game(3, 64, 2));
  for (auto _ : state) benchmark::DoNotOptimize(serialize(parse_game(text)));
}
BENCHMARK(BM_ParseSerialize);

void BM_ExpandFig2Full(benchmark::State& state) {
  const auto doc = corpus("fig2.game");
  const ContractOrder order({PlayerId{0}, PlayerId{1}, PlayerId{2}});
  for (auto _ : state) benchmark::DoNotOptimize(expand_order(doc.tree, order));
}
BENCHMARK(BM_ExpandFig2Full)->Unit(benchmark::kMillisecond);

void BM_EvaluateOrder(benchmark::State& state) {
  const auto doc = random_game(2, 12, 3);
  const ContractOrder order({PlayerId{0}, PlayerId{1}});
  const auto method = state.range(0) == 0 ? EvalMethod::kExpand : EvalMethod::kLazy;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_order(doc.tree, order, method));
  state.SetLabel(state.range(0) == 0 ? "expand" : "lazy");
}
BENCHMARK(BM_EvaluateOrder)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LeadingEquilibrium(benchmark::State& state) {
  const auto doc = random_game(2, static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(leading_equilibrium(doc.tree, PlayerId{0}));
}
BENCHMARK(BM_LeadingEquilibrium)->Arg(15)->Arg(64)->Arg(256);

void BM_CommerceAudit(benchmark::State& state) {
  const CommerceParams params{10, 5, 20, 10, Rational(1, 10)};
  for (auto _ : state) benchmark::DoNotOptimize(audit(2, params));
}
BENCHMARK(BM_CommerceAudit)->Unit(benchmark::kMillisecond);

void BM_TransitivityGame(benchmark::State& state) {
  GeneratorConfig config;
  config.players = 3;
  config.seed = 42;
  CampaignOptions options;
  options.threads = 1;
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(check_transitivity(generate(config, i++).tree, 3, options));
}
BENCHMARK(BM_TransitivityGame)->Unit(benchmark::kMillisecond)->Iterations(20);

}  // namespace

BENCHMARK_MAIN();
