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
#include "nlreg/dynsys.hpp"
#include "nlreg/errors.hpp"
#include "nlreg/integrate.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace nlreg {
namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(ZeroDynamics, HarmonicPointValue) {
  const Benchmark b = find_benchmark("harmonic");
  const System sys = zero_dynamics_rhs(b.plant, b.exo);
  const Vec dx = sys(vec({1.0, 1.0, 0.0}));
  EXPECT_DOUBLE_EQ(dx[0], 0.0);
  EXPECT_DOUBLE_EQ(dx[1], 0.0);
  EXPECT_DOUBLE_EQ(dx[2], -1.0);
  EXPECT_EQ(sys.layout.block("z").size, 1);
  EXPECT_EQ(sys.layout.block("w").offset, 1);
}

TEST(ZeroDynamics, ZeroFieldsGiveZero) {
  PlantSpec p;
  p.n = 2;
  p.r = 1;
  p.f0 = SmoothMap::generic(3, 2, [](auto, auto out) {
    out[0] = 0.0;
    out[1] = 0.0;
  });
  p.f1 = SmoothMap::generic(4, 2, [](auto, auto out) {
    out[0] = 0.0;
    out[1] = 0.0;
  });
  p.q = SmoothMap::generic(4, 1, [](auto, auto out) { out[0] = 0.0; });
  ExosystemSpec e;
  e.r = 1;
  e.s = SmoothMap::generic(1, 1, [](auto, auto out) { out[0] = 0.0; });
  e.w_box = Box::cube(1, -1.0, 1.0);
  const System sys = zero_dynamics_rhs(p, e);
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Vec x = rng.sample(Box::cube(3, -5.0, 5.0));
    EXPECT_EQ(sys(x).norm(), 0.0);
  }
}

TEST(ZeroDynamics, VanDerPolPointValue) {
  const Benchmark b = find_benchmark("vdp");
  const System sys = zero_dynamics_rhs(b.plant, b.exo);
  const Vec dx = sys(vec({0.0, 2.0, 0.0}));
  EXPECT_DOUBLE_EQ(dx[0], 2.0);
  EXPECT_DOUBLE_EQ(dx[1], 0.0);
  EXPECT_DOUBLE_EQ(dx[2], -2.0);
}

TEST(OpenLoop, ZeroInputAndErrorReduceToZeroDynamics) {
  for (const Benchmark& b : registry()) {
    const System ol = augmented_openloop_rhs(b.plant, b.exo, 0.0);
    const System zd = zero_dynamics_rhs(b.plant, b.exo);
    const int n = b.plant.n;
    const int r = b.plant.r;
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
      const Vec z = rng.sample(b.sets.z_box);
      const Vec w = rng.sample(Box::cube(r, -2.0, 2.0));
      Vec x(n + 1 + r);
      x << z, 0.0, w;
      Vec zw(n + r);
      zw << z, w;
      const Vec a = ol(x);
      const Vec c = zd(zw);
      EXPECT_EQ(a.head(n), c.head(n)) << b.id;
      EXPECT_EQ(a.tail(r), c.tail(r)) << b.id;
    }
  }
}

TEST(OpenLoop, NoCouplingMakesZIndependentOfZeta) {
  const Benchmark b = find_benchmark("static");
  const System ol = augmented_openloop_rhs(b.plant, b.exo, 0.3);
  const double h = 1e-6;
  const Vec xp = ol(vec({0.4, h, 0.0}));
  const Vec xm = ol(vec({0.4, -h, 0.0}));
  EXPECT_EQ((xp[0] - xm[0]) / (2 * h), 0.0);
}

TEST(OpenLoop, MatchesHandWrittenOscillator) {
  for (const char* id : {"harmonic", "vdp"}) {
    const Benchmark b = find_benchmark(id);
    testing::OscillatorOracle o;
    o.harmonic = b.id == "harmonic";
    o.mu = b.mu;
    const double u = -0.7;
    const System ol = augmented_openloop_rhs(b.plant, b.exo, u);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
      const Vec x = rng.sample(Box::cube(4, -2.0, 2.0));
      const Vec w = x.tail(2);
      const Vec dx = ol(x);
      EXPECT_NEAR(dx[0], o.zdot(x[0], x[1], w), 1e-15) << id;
      EXPECT_NEAR(dx[1], o.q(x[0], x[1], w) + u, 1e-15) << id;
      EXPECT_NEAR((dx.tail(2) - o.exo(w)).norm(), 0.0, 1e-15) << id;
    }
  }
}

TEST(StateLayout, BlocksAreContiguous) {
  const StateLayout l({{"z", 2}, {"zeta", 1}, {"w", 3}});
  EXPECT_EQ(l.dim(), 6);
  EXPECT_EQ(l.block("w").offset, 3);
  EXPECT_TRUE(l.has("zeta"));
  EXPECT_FALSE(l.has("xi"));
  EXPECT_THROW(l.block("xi"), PreconditionError);
}

System scalar_decay() {
  return System{[](double, std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; },
                StateLayout({{"x", 1}})};
}

System harmonic_oscillator() {
  return System{[](double, std::span<const double> x, std::span<double> dx) {
                  dx[0] = x[1];
                  dx[1] = -x[0];
                },
                StateLayout({{"x", 2}})};
}

TEST(Integrate, ExponentialDecayFixedStep) {
  const Trajectory tr = integrate(scalar_decay(), vec({1.0}), 0.0, 1.0, IntegratorOptions{});
  EXPECT_NEAR(tr.final_state()[0], std::exp(-1.0), 1e-9);
  EXPECT_DOUBLE_EQ(tr.t.back(), 1.0);
}

TEST(Integrate, ExponentialDecayAdaptive) {
  const Trajectory tr =
      integrate(scalar_decay(), vec({1.0}), 0.0, 1.0, IntegratorOptions::adaptive(1e-12, 1e-14));
  EXPECT_NEAR(tr.final_state()[0], std::exp(-1.0), 1e-9);
  EXPECT_GT(tr.stats.steps, 0);
}

TEST(Integrate, HarmonicPeriodReturnsToStart) {
  const Vec x0 = vec({1.0, 0.0});
  const Trajectory tr = integrate(harmonic_oscillator(), x0, 0.0, 2 * std::numbers::pi,
                                  IntegratorOptions::adaptive(1e-10, 1e-12));
  EXPECT_LT((tr.final_state() - x0).norm(), 1e-8);
}

TEST(Integrate, HermiteOutputMatchesClosedForm) {
  IntegratorOptions o = IntegratorOptions::adaptive(1e-11, 1e-13);
  o.output_dt = 0.05;
  const Trajectory tr = integrate(harmonic_oscillator(), vec({1.0, 0.0}), 0.0, 3.0, o);
  for (int i = 0; i < tr.size(); ++i) {
    EXPECT_NEAR(tr.x(0, i), std::cos(tr.t[i]), 1e-8);
  }
}

TEST(Integrate, VanDerPolAmplitude) {
  const SmoothMap f = vdp_field(1.0);
  const System sys{[f](double, std::span<const double> x, std::span<double> dx) { f(x, dx); },
                   StateLayout({{"w", 2}})};
  IntegratorOptions o;
  o.step = 1e-3;
  o.output_dt = 1e-3;
  const Trajectory tr = integrate(sys, vec({2.0, 0.0}), 0.0, 40.0, o);
  double amp = 0.0;
  for (int i = 0; i < tr.size(); ++i) {
    if (tr.t[i] >= 20.0) amp = std::max(amp, std::abs(tr.x(0, i)));
  }
  EXPECT_NEAR(amp, 2.0086, 1e-3);
}

TEST(Integrate, FixedStepIsDeterministic) {
  const Trajectory a = integrate(harmonic_oscillator(), vec({0.3, 0.1}), 0.0, 5.0, {});
  const Trajectory b = integrate(harmonic_oscillator(), vec({0.3, 0.1}), 0.0, 5.0, {});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.t, b.t);
}

TEST(Integrate, DivergenceRaisesWithPartialTrajectory) {
  const System blowup{[](double, std::span<const double> x, std::span<double> dx) {
                        dx[0] = x[0] * x[0];
                      },
                      StateLayout({{"x", 1}})};
  try {
    integrate(blowup, vec({1.0}), 0.0, 2.0, {});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.partial().size(), 0);
    // The exact solution 1 / (1 - t) leaves every bound at t = 1.
    EXPECT_GT(e.partial().t.back(), 0.9);
    EXPECT_LT(e.partial().t.back(), 1.1);
  }
}

TEST(OutputGrid, ClosesExactly) {
  const auto g = output_grid(0.0, 1.0, 0.3);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
}

TEST(Box, InflationAndFloor) {
  const Box b(vec({-1.0, 0.0}), vec({1.0, 0.0}));
  const Box i = b.inflated(0.25, 1e-3);
  EXPECT_DOUBLE_EQ(i.upper()[0], 1.25);
  EXPECT_DOUBLE_EQ(i.lower()[0], -1.25);
  EXPECT_DOUBLE_EQ(i.upper()[1], 1e-3);
  EXPECT_TRUE(i.contains_in_interior(b));
  EXPECT_FALSE(b.contains_in_interior(b));
  EXPECT_EQ(b.clamp(vec({3.0, -2.0})), vec({1.0, 0.0}));
  EXPECT_THROW(Box(vec({1.0}), vec({0.0})), ConfigError);
}

TEST(Rng, SeededStreamsRepeat) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NEAR(Rng(1).unit_vector(5).norm(), 1.0, 1e-15);
}

} // namespace
} // namespace nlreg
