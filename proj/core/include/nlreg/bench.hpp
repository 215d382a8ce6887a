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
#ifndef NLREG_BENCH_HPP
#define NLREG_BENCH_HPP

#include "nlreg/dynsys.hpp"
#include "nlreg/smooth_map.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace nlreg {

struct Benchmark {
  std::string id;
  std::string description;
  PlantSpec plant;
  ExosystemSpec exo;
  int d = 0;
  SmoothMap driver; ///< f with phi^(d) + f(phi, ..., phi^(d-1)) = 0
  ScenarioSets sets;
  bool exponentially_attractive = false;
  bool linear_baseline_expected_pass = false;
  /// Closed-form steady state z(w) on the attractor, when known.
  std::function<Vec(const Vec&)> steady_state_z;
  double mu = 0.0; ///< Van der Pol parameter; 0 for the others
};

struct BenchmarkParams {
  double mu = 1.0;
};

std::vector<Benchmark> registry(const BenchmarkParams& params = {});
std::vector<std::string> benchmark_ids();
/// Throws ConfigError for unknown ids or mu outside (0, 2].
Benchmark find_benchmark(std::string_view id, const BenchmarkParams& params = {});

/// One period of the Van der Pol limit cycle, uniformly sampled in time
/// starting on the section w2 = 0, w1 > 0.
struct ReferenceCycle {
  double mu = 0.0;
  double period = 0.0;
  Mat points; ///< 2 x N
  double amplitude = 0.0; ///< max |w1|

  /// Stored cycle point closest to w.
  Vec nearest(const Vec& w) const;
  /// Distance from w to the nearest stored point.
  double distance(const Vec& w) const;
};

/// Computed once per mu (rtol 1e-11) and cached for the process lifetime.
const ReferenceCycle& vdp_reference_cycle(double mu, int points_per_period = 4096);

/// w' = (w2, mu (1 - w1^2) w2 - w1).
SmoothMap vdp_field(double mu);

} // namespace nlreg

#endif // NLREG_BENCH_HPP
