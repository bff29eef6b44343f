// Serial reference vs OpenMP kernels for the envelope grid and the sweep.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "ctol/config.hpp"
#include "ctol/envelope.hpp"
#include "ctol/sweep.hpp"

namespace {

ctol::RunConfig defaults() {
  ctol::RunConfig c;
  c.controllers = ctol::default_controllers();
  return c;
}

ctol::EnvelopeQuery dense_query() {
  auto settings = defaults().envelope;
  settings.r_count = 400;
  settings.beta_count = 2000;
  return settings.query();
}

void BM_EnvelopeSerial(benchmark::State& state) {
  const auto c = defaults();
  const auto q = dense_query();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctol::evaluate_envelope_serial(q, c.plant.aircraft, c.plant.env, c.plant.polar));
  }
}

void BM_EnvelopeParallel(benchmark::State& state) {
  const auto c = defaults();
  const auto q = dense_query();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctol::evaluate_envelope(q, c.plant.aircraft, c.plant.env, c.plant.polar));
  }
}

const std::filesystem::path& scratch() {
  static const auto dir = [] {
    auto d = std::filesystem::temp_directory_path() / "ctol_bench_sweep";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

ctol::SweepSpec sweep_spec() { return {"phases.v_rot", {7.6, 7.8, 7.98, 8.2}}; }

void BM_SweepSerial(benchmark::State& state) {
  const auto doc = ctol::parse_document(ctol::echo_config(defaults()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctol::run_sweep_serial(doc, sweep_spec(), scratch()));
  }
}

void BM_SweepParallel(benchmark::State& state) {
  const auto doc = ctol::parse_document(ctol::echo_config(defaults()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctol::run_sweep(doc, sweep_spec(), scratch()));
  }
}

}  // namespace

BENCHMARK(BM_EnvelopeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnvelopeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
