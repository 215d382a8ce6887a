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
#include "nlreg/errors.hpp"
#include "nlreg/experiments.hpp"
#include "nlreg/internal_model.hpp"
#include "nlreg/pipeline.hpp"

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

TEST(Tau, HarmonicIsMinusW) {
  const Benchmark b = find_benchmark("harmonic");
  const TauChain tau = build_tau(b.plant, b.exo, 2);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vec zw = rng.sample(Box::cube(3, -2.0, 2.0));
    const Vec t = tau(zw);
    EXPECT_NEAR(t[0], -zw[1], 1e-15);
    EXPECT_NEAR(t[1], -zw[2], 1e-15);
  }
}

TEST(Tau, ConstantSteadyInput) {
  const Benchmark h = find_benchmark("harmonic");
  PlantSpec p = h.plant;
  p.q = SmoothMap::generic(4, 1, [](auto, auto out) { out[0] = 0.75; });
  const TauChain tau = build_tau(p, h.exo, 3);
  const Vec t = tau(vec({0.3, 0.2, -0.9}));
  EXPECT_EQ(t, vec({-0.75, 0.0, 0.0}));
}

TEST(Tau, VanDerPolChainSatisfiesDriverOde) {
  const Benchmark b = find_benchmark("vdp");
  const TauChain tau = build_tau(b.plant, b.exo, 2);
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vec zw = rng.sample(Box::cube(3, -2.0, 2.0));
    const auto ext = tau.extended(as_span(zw));
    ASSERT_EQ(ext.size(), 3u);
    EXPECT_NEAR(ext[0], -zw[1], 1e-15);
    EXPECT_NEAR(ext[1], -zw[2], 1e-15);
    const double f = b.driver.scalar(std::span<const double>(ext.data(), 2));
    EXPECT_NEAR(ext[2], -f, 1e-12);
  }
}

TEST(Tau, NeedsJetCapability) {
  const Benchmark b = find_benchmark("harmonic");
  PlantSpec p = b.plant;
  p.q = SmoothMap::values_only(4, 1, [](std::span<const double> x, std::span<double> y) {
    y[0] = x[2];
  });
  EXPECT_NO_THROW(build_tau(p, b.exo, 1));
  EXPECT_THROW(build_tau(p, b.exo, 2), CapabilityError);
}

SmoothMap square_first() {
  return SmoothMap::generic(2, 1, [](auto eta, auto out) { out[0] = eta[0] * eta[0]; });
}

TEST(Saturate, ClampsOutsideTheBox) {
  const SaturatedDriver fc = saturate(square_first(), Box::cube(2, -2.0, 2.0));
  EXPECT_DOUBLE_EQ(fc(vec({3.0, 0.0})), 4.0);
  EXPECT_DOUBLE_EQ(fc(vec({1.0, 1.0})), 1.0);
  EXPECT_DOUBLE_EQ(fc(vec({-0.5, 7.0})), 0.25);
}

TEST(Saturate, GridBoundsMatchAnalyticValues) {
  const SaturatedDriver fc = saturate(square_first(), Box::cube(2, -2.0, 2.0));
  EXPECT_NEAR(fc.bound(), 4.0, 1e-3);
  EXPECT_NEAR(fc.lipschitz(), 4.0, 1e-3);
}

TEST(Saturate, ImageBoxMustLieInside) {
  const Box s = Box::cube(2, -2.0, 2.0);
  EXPECT_NO_THROW(saturate(square_first(), s, Box::cube(2, -1.0, 1.0)));
  EXPECT_THROW(saturate(square_first(), s, Box::cube(2, -2.0, 2.0)), ConfigError);
  EXPECT_THROW(saturate(square_first(), s, Box::cube(3, -1.0, 1.0)), ConfigError);
}

TEST(PhiC, ZeroDriverIsShift) {
  const SmoothMap zero = SmoothMap::generic(3, 1, [](auto, auto out) { out[0] = 0.0; });
  const InternalModel im(saturate(zero, Box::cube(3, -5.0, 5.0)));
  EXPECT_EQ(im.phi_c(vec({1.0, 2.0, 3.0})), vec({2.0, 3.0, 0.0}));
  EXPECT_EQ(InternalModel::gamma(as_span(vec({1.5, 2.0, 3.0}))), 1.5);
}

TEST(PhiC, VanDerPolDriver) {
  const Benchmark b = find_benchmark("vdp");
  const InternalModel im(saturate(b.driver, Box::cube(2, -3.0, 3.0)));
  const Vec out = phi_c(im, vec({1.0, 0.0}));
  EXPECT_DOUBLE_EQ(out[0], 0.0);
  EXPECT_DOUBLE_EQ(out[1], -1.0);
}

TEST(PhiC, FirstOrderChain) {
  const SmoothMap f = SmoothMap::generic(1, 1, [](auto eta, auto out) { out[0] = 2.0 * eta[0]; });
  const InternalModel im(saturate(f, Box::cube(1, -1.0, 1.0)));
  EXPECT_EQ(im.phi_c(vec({0.25})), vec({-0.5}));
  EXPECT_EQ(im.phi_c(vec({4.0})), vec({-2.0}));
}

struct Built {
  Scenario sc;
  InternalModel im;
};

Built build(const std::string& id, std::optional<SmoothMap> driver = std::nullopt) {
  const Benchmark b = find_benchmark(id);
  Scenario sc = build_scenario(b, b.d, AttractorOptions{});
  const Box raw = *sc.tau->image_box();
  InternalModel im(saturate(driver.value_or(b.driver), raw.inflated(0.25, 1e-3), raw));
  return Built{std::move(sc), std::move(im)};
}

TEST(VerifyInternalModel, OutputIdentityIsExact) {
  for (const std::string id : {"harmonic", "vdp", "static"}) {
    const Built m = build(id);
    const auto res = verify_internal_model(m.im, *m.sc.tau, *m.sc.attractor, m.sc.plant);
    EXPECT_EQ(res.output, 0.0) << id;
    EXPECT_LT(res.chain, 1e-5) << id;
    EXPECT_TRUE(res.passed()) << id;
  }
}

TEST(VerifyInternalModel, VanDerPolChainResidualIsSmall) {
  const Built m = build("vdp");
  const auto res = verify_internal_model(m.im, *m.sc.tau, *m.sc.attractor, m.sc.plant);
  EXPECT_LT(res.chain, 1e-6);
}

TEST(VerifyInternalModel, WrongDriverIsDetected) {
  const SmoothMap linear = SmoothMap::generic(2, 1, [](auto eta, auto out) { out[0] = eta[0]; });
  const Built m = build("vdp", linear);
  const auto res = verify_internal_model(m.im, *m.sc.tau, *m.sc.attractor, m.sc.plant);
  EXPECT_GE(res.chain, 0.1);
  EXPECT_FALSE(res.passed());
}

} // namespace
} // namespace nlreg
