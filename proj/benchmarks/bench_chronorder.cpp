#include <benchmark/benchmark.h>

#include "chronorder/annealing.hpp"
#include "chronorder/bandwidth.hpp"
#include "chronorder/corpus.hpp"
#include "chronorder/local_glm.hpp"
#include "chronorder/synthetic.hpp"

using namespace chronorder;

namespace {

struct Fixture {
  TermDocumentCounts counts;
  MedianObjective objective;

  explicit Fixture(std::size_t m)
      : counts(make_counts(m)),
        objective(counts, WeightScheme::uniform(m), KernelSpec::student_t()) {}

  static TermDocumentCounts make_counts(std::size_t m) {
    DriftCorpusParams params;
    params.seed = 11;
    const auto corpus = make_drift_corpus(params);
    Rng rng(3);
    const auto sample = systematic_sample(corpus, m, 20, rng, SampleMode::conflated);
    return build_counts(sample.documents);
  }
};

const Fixture& fixture(std::size_t m) {
  static const Fixture f8(8), f10(10);
  return m == 8 ? f8 : f10;
}

WordSeries curved_series() {
  std::vector<Observation> obs;
  for (int i = 1; i <= 10; ++i) {
    const double x = i;
    obs.push_back({x, static_cast<double>(3 + (x - 5.5) * (x - 5.5)), 1000.0});
  }
  return WordSeries("w", obs);
}

void BM_ObjectiveEvaluation(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto& f = fixture(m);
  Rng rng(1);
  const auto p = Permutation::random(m, rng);
  for (auto _ : state) benchmark::DoNotOptimize(f.objective(p));
  state.counters["words"] = static_cast<double>(f.objective.num_words());
}
BENCHMARK(BM_ObjectiveEvaluation)->Arg(8)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_PilotFit(benchmark::State& state) {
  const auto s = curved_series();
  for (auto _ : state) benchmark::DoNotOptimize(fit_quadratic_logit(s));
}
BENCHMARK(BM_PilotFit);

void BM_AmiseBandwidth(benchmark::State& state) {
  const auto s = curved_series();
  const auto scheme = WeightScheme::uniform(s.size());
  const auto k = KernelSpec::student_t();
  for (auto _ : state) benchmark::DoNotOptimize(amise_bandwidth(s, scheme, k));
}
BENCHMARK(BM_AmiseBandwidth);

void BM_LocalLinearFit(benchmark::State& state) {
  const auto s = curved_series();
  const auto k = KernelSpec::student_t();
  for (auto _ : state) benchmark::DoNotOptimize(local_linear_fit(s, 4.0, 2.0, k));
}
BENCHMARK(BM_LocalLinearFit);

void BM_ProposeNeighbor(benchmark::State& state) {
  Rng rng(2);
  auto p = Permutation::random(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    p = propose_neighbor(p, rng);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_ProposeNeighbor)->Arg(8)->Arg(10)->Arg(50);

void BM_AnnealSearch(benchmark::State& state) {
  const auto& f = fixture(10);
  const OrderObjective fn = [&](const Permutation& p) { return f.objective(p); };
  AnnealSchedule schedule;
  schedule.max_evaluations = 2'000;
  Rng rng(4);
  const auto init = Permutation::random(10, rng);
  for (auto _ : state) benchmark::DoNotOptimize(search_order(fn, init, schedule, 1));
}
BENCHMARK(BM_AnnealSearch)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveSearch(benchmark::State& state) {
  const auto& f = fixture(8);
  const OrderObjective fn = [&](const Permutation& p) { return f.objective(p); };
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_search(fn, 8));
}
BENCHMARK(BM_ExhaustiveSearch)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
