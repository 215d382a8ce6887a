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
#include "nlreg/closed_loop.hpp"
#include "nlreg/errors.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace nlreg {
namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ControllerConfig controller(const Benchmark& b, double kappa, double k,
                            double box = 3.0) {
  InternalModel im(saturate(b.driver, Box::cube(b.d, -box, box)));
  GainDesign g = design_gains(default_poles(b.d), im.driver().lipschitz(), kappa);
  return ControllerConfig{std::move(im), std::move(g), k};
}

TEST(RegulatorOutput, Arithmetic) {
  const ControllerConfig cc = controller(find_benchmark("harmonic"), 2.0, 10.0);
  const double xi[] = {3.0, 5.0};
  const RegulatorOutput out = regulator_output(cc, xi, 0.1);
  EXPECT_DOUBLE_EQ(out.v, -1.0);
  EXPECT_DOUBLE_EQ(out.u, 2.0);
  EXPECT_DOUBLE_EQ(regulator_output(cc, xi, 0.0).u, 3.0);
}

TEST(RegulatorOutput, ZeroGainIsDiagnosticOnly) {
  ControllerConfig cc = controller(find_benchmark("harmonic"), 2.0, 0.0);
  const double xi[] = {3.0, 5.0};
  const RegulatorOutput out = regulator_output(cc, xi, 0.4);
  EXPECT_DOUBLE_EQ(out.u, 3.0);
  EXPECT_EQ(out.v, 0.0);
  EXPECT_THROW(cc.validate(), ConfigError);
  EXPECT_NO_THROW(cc.validate(true));
}

TEST(ClosedLoopXi, OriginIsAnEquilibrium) {
  for (const char* id : {"harmonic", "static"}) {
    const Benchmark b = find_benchmark(id);
    const ControllerConfig cc = controller(b, 2.0, 10.0);
    const System sys = closed_loop_rhs_xi(b.plant, b.exo, cc);
    EXPECT_EQ(sys(Vec::Zero(sys.dim())).norm(), 0.0) << id;
    const System eta = closed_loop_rhs_eta(b.plant, b.exo, cc);
    EXPECT_EQ(eta(Vec::Zero(eta.dim())).norm(), 0.0) << id;
  }
}

TEST(ClosedLoopXi, ZeroGainLeavesInternalModelAlone) {
  const Benchmark b = find_benchmark("vdp");
  const ControllerConfig cc = controller(b, 2.0, 0.0);
  const System sys = closed_loop_rhs_xi(b.plant, b.exo, cc);
  const Vec x = vec({0.2, 0.5, 1.0, -0.4, 1.5, 0.3});
  const Vec dx = sys(x);
  const Vec phi = cc.im.phi_c(vec({1.0, -0.4}));
  EXPECT_EQ(dx.segment(2, 2), phi);
}

TEST(ClosedLoopXi, MatchesHandWrittenOscillator) {
  for (const char* id : {"harmonic", "vdp"}) {
    const Benchmark b = find_benchmark(id);
    testing::OscillatorOracle o;
    o.harmonic = b.id == "harmonic";
    o.mu = b.mu;
    const double k = 7.0;
    const ControllerConfig cc = controller(b, 3.0, k, 10.0);
    const System sys = closed_loop_rhs_xi(b.plant, b.exo, cc);
    Rng rng(9);
    for (int i = 0; i < 20; ++i) {
      const Vec x = rng.sample(Box::cube(6, -2.0, 2.0));
      const double z = x[0], zeta = x[1];
      const Vec xi = x.segment(2, 2);
      const Vec w = x.tail(2);
      const double v = -k * zeta;
      const Vec dx = sys(x);
      EXPECT_NEAR(dx[0], o.zdot(z, zeta, w), 1e-14);
      EXPECT_NEAR(dx[1], o.q(z, zeta, w) + xi[0] + v, 1e-14);
      EXPECT_NEAR(dx[2], xi[1] + cc.gains.g[0] * v, 1e-13);
      EXPECT_NEAR(dx[3], -o.driver(xi[0], xi[1]) + cc.gains.g[1] * v, 1e-12);
      EXPECT_NEAR((dx.tail(2) - o.exo(w)).norm(), 0.0, 1e-15);
    }
  }
}

TEST(ClosedLoopEta, CoordinateMapsRoundTrip) {
  const Vec g = vec({4.0, 4.0});
  const Vec x = vec({0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  EXPECT_LT((eta_state_to_xi(xi_state_to_eta(x, 1, 2, g), 1, 2, g) - x).norm(), 1e-15);
}

TEST(ClosedLoopEta, AgreesOnZwBlocksWhenErrorIsZero) {
  const Benchmark b = find_benchmark("vdp");
  const ControllerConfig cc = controller(b, 2.0, 10.0);
  const System xs = closed_loop_rhs_xi(b.plant, b.exo, cc);
  const System es = closed_loop_rhs_eta(b.plant, b.exo, cc);
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    Vec x = rng.sample(Box::cube(6, -2.0, 2.0));
    x[1] = 0.0;
    const Vec dx = xs(x);
    const Vec de = es(xi_state_to_eta(x, 1, 2, cc.gains.g));
    EXPECT_EQ(dx[0], de[0]);
    EXPECT_EQ(dx.tail(2), de.segment(1, 2));
  }
}

TEST(ClosedLoopEta, TrajectoriesAgree) {
  for (const char* id : {"harmonic", "vdp", "static"}) {
    const Benchmark b = find_benchmark(id);
    const ControllerConfig cc = controller(b, 3.0, 12.0);
    const System xs = closed_loop_rhs_xi(b.plant, b.exo, cc);
    const System es = closed_loop_rhs_eta(b.plant, b.exo, cc);
    const int n = b.plant.n;
    const int r = b.plant.r;
    const int d = b.d;
    Rng rng(21);
    Vec x0(n + 1 + d + r);
    x0 << rng.sample(b.sets.z_box), 0.5, rng.sample(Box::cube(d, -1.0, 1.0)),
        b.exo.project(rng.sample(b.exo.w_box));
    IntegratorOptions o = IntegratorOptions::adaptive(1e-12, 1e-14);
    o.output_dt = 0.05;
    const Trajectory tx = integrate(xs, x0, 0.0, 10.0, o);
    const Trajectory te = integrate(es, xi_state_to_eta(x0, n, r, cc.gains.g), 0.0, 10.0, o);
    ASSERT_EQ(tx.size(), te.size());
    double err = 0.0;
    for (int i = 0; i < tx.size(); ++i) {
      err = std::max(err, std::abs(tx.x(n, i) - te.x(n + r + d, i)));
    }
    EXPECT_LT(err, 1e-8) << id;
  }
}

TEST(Observer, ZeroGainDecouples) {
  const Benchmark b = find_benchmark("vdp");
  const ControllerConfig cc = controller(b, 2.0, 10.0);
  GainDesign zero = cc.gains;
  zero.g.setZero();
  const System sys = zero_dynamics_with_observer_rhs(b.plant, b.exo, cc.im, zero);
  EXPECT_EQ(sys.layout.block("xi").offset, 3);
  const Vec x = vec({0.2, 1.0, -0.5, 0.7, -1.1});
  const Vec dx = sys(x);
  EXPECT_EQ(dx.tail(2), cc.im.phi_c(vec({0.7, -1.1})));
}

TEST(Observer, TauGraphIsInvariantAtEveryPoint) {
  // On the graph xi = tau(z, w) the innovation vanishes and xi moves with tau.
  const Benchmark b = find_benchmark("vdp");
  const ControllerConfig cc = controller(b, 2.0, 10.0);
  const System sys = zero_dynamics_with_observer_rhs(b.plant, b.exo, cc.im, cc.gains);
  const Vec x = vec({0.3, 1.2, -0.4, -1.2, 0.4});
  const Vec dx = sys(x);
  // d/dt (-w) = -s(w)
  testing::OscillatorOracle o;
  o.harmonic = false;
  o.mu = 1.0;
  const Vec sw = o.exo(x.segment(1, 2));
  EXPECT_NEAR(dx[3], -sw[0], 1e-13);
  EXPECT_NEAR(dx[4], -sw[1], 1e-13);
}

} // namespace
} // namespace nlreg
