#include "acf/camera.hpp"
#include "acf/estimation.hpp"
#include "acf/pipeline.hpp"
#include "acf/synthetic.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

acf::VoterSet cluster(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.01);
  acf::VoterSet v;
  for (std::size_t i = 0; i < n; ++i) {
    v.points.emplace_back(g(rng), g(rng), 0.8 + g(rng));
    v.source_seed.push_back(i);
  }
  return v;
}

void BM_MeanShift(benchmark::State& state) {
  const acf::VoterSet v = cluster(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(acf::mean_shift_mode(v, {}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MeanShift)->RangeMultiplier(2)->Range(25, 400)->Complexity();

const acf::Scene& scene() {
  static const acf::Scene s = acf::generate_scene(acf::random_scene_spec(3, {}));
  return s;
}

void BM_GenerateScene(benchmark::State& state) {
  const acf::SceneSpec spec = acf::random_scene_spec(3, {});
  for (auto _ : state) benchmark::DoNotOptimize(acf::generate_scene(spec));
}
BENCHMARK(BM_GenerateScene)->Unit(benchmark::kMillisecond);

void BM_SampleSeeds(benchmark::State& state) {
  const acf::Scene& s = scene();
  const acf::Roi roi{200, 150, 440, 330};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(acf::sample_seeds(roi, s.depth, s.spec.camera.intrinsics, n));
}
BENCHMARK(BM_SampleSeeds)->Arg(8)->Arg(14)->Arg(28);

void BM_ScatterLine(benchmark::State& state) {
  const acf::PredictionBundle b = acf::emulate_predictions(scene(), {0.005, 0.3}, 5);
  const acf::RoiPrediction& r = b.rois.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(acf::estimate_axis_scatterline(r.seeds, r.scatter_offsets, r.labels, r.mask));
  }
}
BENCHMARK(BM_ScatterLine)->Unit(benchmark::kMicrosecond);

void BM_EstimateScene(benchmark::State& state) {
  const acf::PredictionBundle b = acf::emulate_predictions(scene(), {0.005, 0.1}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(acf::estimate_scene(b));
}
BENCHMARK(BM_EstimateScene)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
