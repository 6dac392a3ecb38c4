#include <benchmark/benchmark.h>

#include "lgshor/elements.hpp"
#include "lgshor/interference.hpp"
#include "lgshor/shor.hpp"

using namespace lgshor;

namespace {

ScreenGeometry screen(int res) {
  ScreenGeometry geom{};
  geom.res_x = geom.res_y = res;
  return geom;
}

void BM_RenderPattern(benchmark::State& state) {
  const auto geom = screen(static_cast<int>(state.range(0)));
  const LgBeamParams beam{};
  const SourceSet sources = sample_sources(ModeState::single(+1, Polarization::H), beam, geom);
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_pattern(sources, geom));
  }
  state.SetItemsProcessed(state.iterations() * geom.res_x * geom.res_y);
}
BENCHMARK(BM_RenderPattern)->Arg(128)->Arg(256)->Arg(512);

void BM_ApplyDft(benchmark::State& state) {
  const BasisMap basis = BasisMap::alternating(static_cast<int>(state.range(0)));
  const ModeState input = make_input_state(basis);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_dft(input, basis));
  }
}
BENCHMARK(BM_ApplyDft)->Arg(2)->Arg(6)->Arg(10);

void BM_SimulateMefCircuit(benchmark::State& state) {
  const CircuitPath circuit = build_mef_circuit(ShorProblem{15, 11, 2});
  const std::map<std::string, ModeState> sources{
      {"laser", ModeState::single(0, Polarization::H)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_path(circuit, sources));
  }
}
BENCHMARK(BM_SimulateMefCircuit);

void BM_SimulateDftCircuit(benchmark::State& state) {
  const CircuitPath circuit = build_dft_circuit(BasisMap::compiled_default());
  ModeState post_mef;
  post_mef.set(+1, Polarization::H, {1.0, 0.0});
  post_mef.set(-1, Polarization::V, {1.0, 0.0});
  post_mef.set(+2, Polarization::H, {1.0, 0.0});
  post_mef.set(-2, Polarization::V, {1.0, 0.0});
  const std::map<std::string, ModeState> sources{{"in", post_mef}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_path(circuit, sources));
  }
}
BENCHMARK(BM_SimulateDftCircuit);

void BM_PhysicalPipeline(benchmark::State& state) {
  RunOptions options;
  options.screen = screen(static_cast<int>(state.range(0)));
  const ShorProblem problem{15, 11, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(problem, RunMode::Physical, options));
  }
}
BENCHMARK(BM_PhysicalPipeline)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
