#include <benchmark/benchmark.h>

#include <string>

#include "cadefect/cadefect.hpp"

using namespace cadefect;

namespace {

std::string path(const std::string& rel) { return std::string(CADEFECT_DATA_DIR) + "/" + rel; }

void BM_Admissible(benchmark::State& state) {
  const auto x = *io::load_subshift(path("subshifts/" + std::string(state.range(0) ? "s18" : "e110") + ".json")).one;
  // a long admissible word, so the scan runs to the end
  const auto u = ca::reference_word(x, 0);
  symbolic::Word w;
  while (static_cast<std::int64_t>(w.size()) < state.range(1)) w.push_back(u[w.size() % u.size()]);
  for (auto _ : state) benchmark::DoNotOptimize(x.admissible(w));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Admissible)->Args({0, 64})->Args({0, 1024})->Args({1, 64})->Args({1, 1024});

void BM_ApplyTorus(benchmark::State& state) {
  const auto ca = ca::Ca1D::from_eca_number(110);
  symbolic::CyclicConfig c = tracker::random_config(static_cast<std::size_t>(state.range(0)), 2, 1);
  for (auto _ : state) {
    c = ca.apply(c);
    benchmark::DoNotOptimize(c.word.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyTorus)->Arg(256)->Arg(4096);

void BM_DefectField(benchmark::State& state) {
  const auto x = *io::load_subshift(path("subshifts/dstar.json")).one;
  const auto c = tracker::random_config(static_cast<std::size_t>(state.range(0)), 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(defect::defect_field(c, x).values.data());
}
BENCHMARK(BM_DefectField)->Arg(256)->Arg(2048);

void BM_Classify(benchmark::State& state) {
  const auto x = *io::load_subshift(path("subshifts/e110.json")).one;
  const auto rule = *io::load_rule(path("rules/eca110.json")).one;
  const spectral::DomainLabeller lab(x, &rule);
  const auto c = io::load_config(path("configs/eca110_ebar.json"), x.alphabet()).ep;
  for (auto _ : state) benchmark::DoNotOptimize(defect::classify(c, x, lab).r);
}
BENCHMARK(BM_Classify);

void BM_Track(benchmark::State& state) {
  const auto x = *io::load_subshift(path("subshifts/dstar.json")).one;
  const auto rule = *io::load_rule(path("rules/eca62.json")).one;
  const spectral::DomainLabeller lab(x, &rule);
  const auto init = tracker::random_config(static_cast<std::size_t>(state.range(0)), 2, 1);
  tracker::TrackerOptions opt;
  for (auto _ : state) benchmark::DoNotOptimize(tracker::track(rule, init, 256, x, lab, opt).tracks.size());
}
BENCHMARK(BM_Track)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
