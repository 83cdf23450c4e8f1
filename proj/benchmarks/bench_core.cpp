// Copyright 2026 The btq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "btq/coherent.hpp"
#include "btq/observable.hpp"
#include "btq/operators.hpp"
#include "btq/section_space.hpp"

namespace {

const btq::KahlerModel& sphere() {
  static const btq::KahlerModel model = btq::make_model(btq::ModelKind::Sphere);
  return model;
}

const btq::KahlerModel& torus() {
  static const btq::KahlerModel model = btq::make_model(btq::ModelKind::Torus, btq::Complex(0.0, 1.0));
  return model;
}

void BM_SphereLevel(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(btq::make_level(sphere(), m));
}
BENCHMARK(BM_SphereLevel)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TorusLevel(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(btq::make_level(torus(), m));
}
BENCHMARK(BM_TorusLevel)->Arg(4)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SphereToeplitz(benchmark::State& state) {
  const btq::Level level = btq::make_level(sphere(), static_cast<int>(state.range(0)));
  const btq::Observable f = btq::parse_observable(sphere(), "x1*x3");
  for (auto _ : state) benchmark::DoNotOptimize(btq::toeplitz(level, f));
}
BENCHMARK(BM_SphereToeplitz)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_CovariantSymbol(benchmark::State& state) {
  const btq::Level level = btq::make_level(sphere(), static_cast<int>(state.range(0)));
  const btq::OperatorMatrix t = btq::toeplitz(level, btq::parse_observable(sphere(), "x3"));
  const btq::ChartPoint x{btq::Complex(0.3, -0.7)};
  for (auto _ : state) benchmark::DoNotOptimize(btq::covariant_symbol(level.frame, t, x));
}
BENCHMARK(BM_CovariantSymbol)->Arg(8)->Arg(64);

void BM_SymbolOnNodes(benchmark::State& state) {
  const btq::Level level = btq::make_level(sphere(), static_cast<int>(state.range(0)));
  const btq::OperatorMatrix t = btq::toeplitz(level, btq::parse_observable(sphere(), "x3"));
  for (auto _ : state) benchmark::DoNotOptimize(btq::symbol_on_nodes(level, t));
}
BENCHMARK(BM_SymbolOnNodes)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
