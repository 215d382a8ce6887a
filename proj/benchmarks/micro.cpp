/*
 Copyright 2026 The nlreg Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "nlreg/pipeline.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace nlreg;

const RegulatorDesign& vdp_design() {
  static const RegulatorDesign d = [] {
    DesignOptions o;
    o.kappa = 2.0;
    return design_regulator(find_benchmark("vdp"), o);
  }();
  return d;
}

void BM_ClosedLoopRk4(benchmark::State& state) {
  const RegulatorDesign& d = vdp_design();
  const System sys = closed_loop_rhs_xi(d.scenario.plant, d.scenario.exo, d.controller());
  const auto init = sample_regulation_inits(d.scenario, 1, 3).front();
  Vec x0(sys.dim());
  x0 << init.z, init.e, init.xi, init.w;
  IntegratorOptions io;
  io.output_dt = 0.1;
  const double horizon = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(sys, x0, 0.0, horizon, io));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(horizon / io.step));
}
BENCHMARK(BM_ClosedLoopRk4)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_LieChain(benchmark::State& state) {
  const Benchmark b = find_benchmark("vdp");
  const TauChain tau = build_tau(b.plant, b.exo, b.d);
  const SmoothMap field = zero_dynamics_field(b.plant, b.exo);
  const Vec x0 = Vec::Constant(field.in_dim(), 0.3);
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lie_chain(tau.steady_input(), field, count, as_span(x0)));
  }
}
BENCHMARK(BM_LieChain)->DenseRange(1, 5);

void BM_GraphDistance(benchmark::State& state) {
  const RegulatorDesign& d = vdp_design();
  const GraphIndex& index = *d.scenario.index;
  Rng rng(5);
  const Vec zw = d.scenario.attractor->point(123) + 0.01 * rng.unit_vector(d.scenario.attractor->dim());
  Vec xi = (*d.scenario.tau)(zw);
  xi[0] += 0.02;
  const bool refine = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.distance(zw, xi, refine));
  }
}
BENCHMARK(BM_GraphDistance)->Arg(0)->Arg(1);

} // namespace

BENCHMARK_MAIN();
