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
#include "nlreg/jet.hpp"
#include "nlreg/smooth_map.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace nlreg {
namespace {

Jet variable(double t0, int order) {
  Jet t = Jet::constant(t0, order);
  if (order >= 1) t.coeff(1) = 1.0;
  return t;
}

TEST(Jet, ProductAndQuotientMatchClosedForm) {
  // (1 + t)^2 / (1 - t) at t = 0: 1 + 3t + 4t^2 + 4t^3 + ...
  const Jet t = variable(0.0, 4);
  const Jet r = (1.0 + t) * (1.0 + t) / (1.0 - t);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], 3.0);
  EXPECT_DOUBLE_EQ(r[2], 4.0);
  EXPECT_DOUBLE_EQ(r[3], 4.0);
  EXPECT_DOUBLE_EQ(r[4], 4.0);
}

TEST(Jet, ElementaryFunctionsMatchDerivatives) {
  const double t0 = 0.7;
  const Jet t = variable(t0, 5);
  const Jet s = sin(t);
  const Jet c = cos(t);
  const Jet e = exp(t);
  for (int k = 0; k <= 5; ++k) {
    const double ds = std::sin(t0 + k * std::numbers::pi / 2);
    const double dc = std::cos(t0 + k * std::numbers::pi / 2);
    EXPECT_NEAR(s.derivative(k), ds, 1e-14) << k;
    EXPECT_NEAR(c.derivative(k), dc, 1e-14) << k;
    EXPECT_NEAR(e.derivative(k), std::exp(t0), 1e-13) << k;
  }
}

TEST(Jet, IntegerPower) {
  const Jet t = variable(2.0, 3);
  const Jet p = pow(t, 3);
  EXPECT_DOUBLE_EQ(p.derivative(0), 8.0);
  EXPECT_DOUBLE_EQ(p.derivative(1), 12.0);
  EXPECT_DOUBLE_EQ(p.derivative(2), 12.0);
  EXPECT_DOUBLE_EQ(p.derivative(3), 6.0);
  EXPECT_DOUBLE_EQ(pow(t, 0).value(), 1.0);
}

TEST(Jet, ScalarsPromoteToOrderZero) {
  Jet a = 3.0;
  EXPECT_EQ(a.order(), 0);
  const Jet b = a * variable(1.0, 2);
  EXPECT_EQ(b.order(), 2);
  EXPECT_DOUBLE_EQ(b[1], 3.0);
  EXPECT_DOUBLE_EQ(b[2], 0.0);
}

SmoothMap harmonic_field() {
  return SmoothMap::generic(2, 2, [](auto w, auto out) {
    out[0] = w[1];
    out[1] = -w[0];
  });
}

SmoothMap first_coordinate() {
  return SmoothMap::generic(2, 1, [](auto w, auto out) { out[0] = w[0]; });
}

TEST(LieChain, HarmonicFirstCoordinate) {
  const double x0[] = {0.3, 0.4};
  const auto chain = lie_chain(first_coordinate(), harmonic_field(), 2, x0);
  ASSERT_EQ(chain.size(), 2u);
  EXPECT_DOUBLE_EQ(chain[0], 0.3);
  EXPECT_DOUBLE_EQ(chain[1], 0.4);
}

TEST(LieChain, ConstantHasZeroDerivatives) {
  const SmoothMap c = SmoothMap::generic(2, 1, [](auto, auto out) { out[0] = 2.5; });
  const double x0[] = {0.3, -1.2};
  const auto chain = lie_chain(c, vdp_field(1.0), 3, x0);
  EXPECT_DOUBLE_EQ(chain[0], 2.5);
  EXPECT_DOUBLE_EQ(chain[1], 0.0);
  EXPECT_DOUBLE_EQ(chain[2], 0.0);
}

TEST(LieChain, VanDerPolFirstCoordinate) {
  const double x0[] = {1.0, 1.0};
  const auto chain = lie_chain(first_coordinate(), vdp_field(1.0), 3, x0);
  EXPECT_DOUBLE_EQ(chain[0], 1.0);
  EXPECT_DOUBLE_EQ(chain[1], 1.0);
  EXPECT_DOUBLE_EQ(chain[2], -1.0);
}

TEST(LieChain, AgreesWithPolynomialFitAlongFlow) {
  const SmoothMap field = vdp_field(1.5);
  const SmoothMap g = SmoothMap::generic(2, 1, [](auto w, auto out) {
    using std::sin;
    out[0] = sin(w[0]) * w[1] + w[0] * w[0];
  });
  const Rhs rhs = [&field](double, std::span<const double> x, std::span<double> dx) {
    field(x, dx);
  };
  Vec x0(2);
  x0 << 0.8, -1.3;
  const auto chain = lie_chain(g, field, 4, as_span(x0));
  const auto fd = testing::derivatives_along_flow(
      rhs, [&g](const Vec& x) { return g.scalar(as_span(x)); }, x0, 3);
  for (int k = 0; k <= 3; ++k) {
    EXPECT_NEAR(chain[k], fd[k], 1e-7 * std::max(1.0, std::abs(fd[k]))) << k;
  }
}

TEST(LieChain, ValuesOnlyMapRejectsHigherOrders) {
  const SmoothMap g =
      SmoothMap::values_only(2, 1, [](std::span<const double> x, std::span<double> y) {
        y[0] = x[0];
      });
  const double x0[] = {0.1, 0.2};
  EXPECT_NO_THROW(lie_chain(g, harmonic_field(), 1, x0));
  EXPECT_THROW(lie_chain(g, harmonic_field(), 2, x0), CapabilityError);
}

TEST(SmoothMap, JacobianFromFirstOrderJets) {
  const SmoothMap f = SmoothMap::generic(2, 1, [](auto x, auto out) {
    out[0] = x[0] * x[0] * x[1];
  });
  const double x[] = {2.0, 3.0};
  const Mat j = f.jacobian(x);
  ASSERT_EQ(j.rows(), 1);
  ASSERT_EQ(j.cols(), 2);
  EXPECT_DOUBLE_EQ(j(0, 0), 12.0);
  EXPECT_DOUBLE_EQ(j(0, 1), 4.0);
}

} // namespace
} // namespace nlreg
