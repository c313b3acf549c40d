// Hot-path timings on the bundled models: closed form vs coupling LP, the
// section solver, support enumeration, resampling, and the Born pipeline.

#include <benchmark/benchmark.h>

#include <ctxkit/bootstrap.hpp>
#include <ctxkit/cbd.hpp>
#include <ctxkit/model_io.hpp>
#include <ctxkit/quantum.hpp>
#include <ctxkit/sheaf.hpp>

#include <string>

namespace {

std::string data_path(const std::string& name) {
  return std::string(CTXKIT_DATA_DIR) + "/" + name;
}

void BM_Cyclic2ClosedForm(benchmark::State& state) {
  const auto model = ctxkit::load_model(data_path("adopt_boxer.json"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctxkit::cbd::cyclic2_analyze(model));
  }
}
BENCHMARK(BM_Cyclic2ClosedForm);

void BM_CouplingVerdictSmall(benchmark::State& state) {
  const auto model = ctxkit::load_model(data_path("adopt_boxer.json"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctxkit::cbd::check_cbd_contextuality(model));
  }
}
BENCHMARK(BM_CouplingVerdictSmall);

// 16 binary variables -> 65536 LP columns; the largest bundled instance.
void BM_CouplingVerdictPress(benchmark::State& state) {
  const auto model = ctxkit::load_model(data_path("press_box_can_leaves.json"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctxkit::cbd::check_cbd_contextuality(model));
  }
}
BENCHMARK(BM_CouplingVerdictPress)->Unit(benchmark::kMillisecond);

void BM_GlobalAssignments(benchmark::State& state) {
  const auto poss = ctxkit::support_of(ctxkit::load_model(data_path("bell_fig1.json")));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctxkit::sheaf::global_assignments(poss));
  }
}
BENCHMARK(BM_GlobalAssignments);

void BM_GlobalSectionLp(benchmark::State& state) {
  const auto model = ctxkit::load_model(data_path("bell_fig1.json"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctxkit::sheaf::solve_global_section(model));
  }
}
BENCHMARK(BM_GlobalSectionLp);

void BM_Bootstrap1k(benchmark::State& state) {
  const auto model = ctxkit::load_model(data_path("adopt_boxer.json"));
  const auto plan = ctxkit::bootstrap::infer_sample_sizes(model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctxkit::bootstrap::bootstrap_noncontextuality(model, plan, 1000, 0));
  }
}
BENCHMARK(BM_Bootstrap1k)->Unit(benchmark::kMillisecond);

void BM_BornModel(benchmark::State& state) {
  const auto scenario = ctxkit::quantum::load_scenario(data_path("bell_fig1.qjson"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctxkit::quantum::born_model(scenario));
  }
}
BENCHMARK(BM_BornModel);

}  // namespace

BENCHMARK_MAIN();
