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
#include "nlreg/bench.hpp"

#include "nlreg/errors.hpp"
#include "nlreg/integrate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

namespace nlreg {

namespace {

// Shared plant of the oscillator benchmarks: z' = -z + w1 + 0.1 zeta,
// zeta' = w1 + zeta z + u.
PlantSpec oscillator_plant() {
  PlantSpec p;
  p.n = 1;
  p.r = 2;
  p.f0 = SmoothMap::generic(3, 1, [](auto x, auto out) { out[0] = -x[0] + x[1]; });
  p.f1 = SmoothMap::generic(4, 1, [](auto, auto out) { out[0] = 0.1; });
  p.q = SmoothMap::generic(4, 1, [](auto x, auto out) { out[0] = x[2] + x[1] * x[0]; });
  return p;
}

Benchmark harmonic() {
  Benchmark b;
  b.id = "harmonic";
  b.description = "harmonic exosystem on the unit circle, linear driver f(a,b) = a";
  b.plant = oscillator_plant();
  b.exo.r = 2;
  b.exo.s = SmoothMap::generic(2, 2, [](auto w, auto out) {
    out[0] = w[1];
    out[1] = -w[0];
  });
  b.exo.w_box = Box::cube(2, -1.0, 1.0);
  b.exo.admissible = [](const Vec& w) -> Vec {
    const double norm = w.norm();
    if (norm == 0.0) return Vec::Unit(2, 0);
    return w / norm;
  };
  b.d = 2;
  b.driver = SmoothMap::generic(2, 1, [](auto eta, auto out) { out[0] = eta[0]; });
  b.sets.z_box = Box::cube(1, -2.0, 2.0);
  b.sets.xi_box = Box::cube(2, -2.0, 2.0);
  b.exponentially_attractive = true;
  b.linear_baseline_expected_pass = true;
  b.steady_state_z = [](const Vec& w) {
    Vec z(1);
    z[0] = 0.5 * (w[0] - w[1]);
    return z;
  };
  return b;
}

Benchmark vdp(double mu) {
  Benchmark b;
  b.id = "vdp";
  b.description = "Van der Pol exosystem on its limit cycle, driver f(a,b) = -mu(1-a^2)b + a";
  b.mu = mu;
  b.plant = oscillator_plant();
  b.exo.r = 2;
  b.exo.s = vdp_field(mu);
  b.exo.w_box = Box(Vec::Constant(2, 0.0) - Eigen::Vector2d(2.5, 3.0),
                    Eigen::Vector2d(2.5, 3.0));
  b.exo.admissible = [mu](const Vec& w) { return vdp_reference_cycle(mu).nearest(w); };
  b.d = 2;
  b.driver = SmoothMap::generic(2, 1, [mu](auto eta, auto out) {
    out[0] = -mu * (1.0 - eta[0] * eta[0]) * eta[1] + eta[0];
  });
  b.sets.z_box = Box::cube(1, -2.0, 2.0);
  b.sets.xi_box = Box::cube(2, -5.0, 5.0);
  b.exponentially_attractive = true;
  b.linear_baseline_expected_pass = false;
  return b;
}

Benchmark stabilization() {
  Benchmark b;
  b.id = "static";
  b.description = "constant zero exosystem, pure stabilization";
  b.plant.n = 1;
  b.plant.r = 1;
  b.plant.f0 = SmoothMap::generic(2, 1, [](auto x, auto out) { out[0] = -x[0]; });
  b.plant.f1 = SmoothMap::generic(3, 1, [](auto, auto out) { out[0] = 0.0; });
  b.plant.q = SmoothMap::generic(3, 1, [](auto x, auto out) { out[0] = x[1]; });
  b.exo.r = 1;
  b.exo.s = SmoothMap::generic(1, 1, [](auto, auto out) { out[0] = 0.0; });
  b.exo.w_box = Box::point(Vec::Zero(1));
  b.d = 1;
  b.driver = SmoothMap::generic(1, 1, [](auto, auto out) { out[0] = 0.0; });
  b.sets.z_box = Box::cube(1, -1.0, 1.0);
  b.sets.xi_box = Box::cube(1, -1.0, 1.0);
  b.exponentially_attractive = true;
  b.linear_baseline_expected_pass = true;
  b.steady_state_z = [](const Vec&) { return Vec::Zero(1); };
  return b;
}

void check_mu(double mu) {
  if (!(mu > 0.0 && mu <= 2.0)) throw ConfigError("vdp: mu must lie in (0, 2]");
}

// Downward crossing of w2 = 0 on the right half plane, refined by Newton
// iterations on the flow time.
Vec next_section_crossing(const System& sys, const Vec& x0, double& elapsed) {
  IntegratorOptions o = IntegratorOptions::adaptive(1e-11, 1e-13);
  o.max_step = 0.01;
  o.output_dt = 1e-3;
  // Skip a short initial arc so a start on the section is not re-detected.
  const Trajectory traj = integrate(sys, x0, 0.0, 20.0, o);
  for (int i = 20; i + 1 < traj.size(); ++i) {
    const double a = traj.x(1, i);
    const double b = traj.x(1, i + 1);
    if (a > 0.0 && b <= 0.0 && traj.x(0, i) > 0.0) {
      Vec base = traj.state(i);
      double s = traj.t[i] + (traj.t[i + 1] - traj.t[i]) * a / (a - b);
      for (int it = 0; it < 8; ++it) {
        const Vec x = rk4_flow(sys.rhs, base, s - traj.t[i], 1e-4);
        const Vec f = sys(x);
        s -= x[1] / f[1];
      }
      elapsed = s;
      return rk4_flow(sys.rhs, base, s - traj.t[i], 1e-4);
    }
  }
  throw PreconditionError("vdp reference cycle: no section crossing found");
}

std::unique_ptr<ReferenceCycle> compute_cycle(double mu, int per_period) {
  ExosystemSpec exo;
  exo.r = 2;
  exo.s = vdp_field(mu);
  const System sys{[s = exo.s](double, std::span<const double> x, std::span<double> dx) {
                     s(x, dx);
                   },
                   StateLayout({{"w", 2}})};
  IntegratorOptions o = IntegratorOptions::adaptive(1e-11, 1e-13);
  o.output_dt = 1.0;
  const Trajectory settle = integrate(sys, Eigen::Vector2d(2.0, 0.0), 0.0, 60.0, o);
  double t_cross = 0.0;
  Vec p0 = next_section_crossing(sys, settle.final_state(), t_cross);
  p0[1] = 0.0;
  double period = 0.0;
  next_section_crossing(sys, p0, period);

  auto cycle = std::make_unique<ReferenceCycle>();
  cycle->mu = mu;
  cycle->period = period;
  IntegratorOptions fine = IntegratorOptions::adaptive(1e-11, 1e-13);
  fine.max_step = 0.005;
  fine.output_dt = period / per_period;
  const Trajectory one = integrate(sys, p0, 0.0, period, fine);
  cycle->points = one.x.leftCols(std::min(one.size(), per_period));
  cycle->amplitude = cycle->points.row(0).cwiseAbs().maxCoeff();
  return cycle;
}

} // namespace

SmoothMap vdp_field(double mu) {
  return SmoothMap::generic(2, 2, [mu](auto w, auto out) {
    out[0] = w[1];
    out[1] = mu * (1.0 - w[0] * w[0]) * w[1] - w[0];
  });
}

Vec ReferenceCycle::nearest(const Vec& w) const {
  Eigen::Index arg = 0;
  (points.colwise() - w).colwise().squaredNorm().minCoeff(&arg);
  return points.col(arg);
}

double ReferenceCycle::distance(const Vec& w) const {
  return (points.colwise() - w).colwise().norm().minCoeff();
}

const ReferenceCycle& vdp_reference_cycle(double mu, int points_per_period) {
  check_mu(mu);
  if (points_per_period < 16) throw ConfigError("vdp_reference_cycle: too few points");
  static std::mutex mutex;
  static std::map<std::pair<double, int>, std::unique_ptr<ReferenceCycle>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{mu, points_per_period}];
  if (!slot) slot = compute_cycle(mu, points_per_period);
  return *slot;
}

std::vector<Benchmark> registry(const BenchmarkParams& params) {
  check_mu(params.mu);
  return {harmonic(), vdp(params.mu), stabilization()};
}

std::vector<std::string> benchmark_ids() { return {"harmonic", "vdp", "static"}; }

Benchmark find_benchmark(std::string_view id, const BenchmarkParams& params) {
  if (id == "harmonic") return harmonic();
  if (id == "vdp") {
    check_mu(params.mu);
    return vdp(params.mu);
  }
  if (id == "static") return stabilization();
  throw ConfigError("unknown benchmark '" + std::string(id) + "'");
}

} // namespace nlreg
