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
#include "nlreg/analysis.hpp"
#include "nlreg/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace nlreg {
namespace {

std::vector<double> grid(double t1, double dt) {
  std::vector<double> t;
  for (int i = 0; i * dt <= t1 + 1e-12; ++i) t.push_back(i * dt);
  return t;
}

TEST(FitDecay, SyntheticExponential) {
  const auto t = grid(5.0, 0.01);
  std::vector<double> m;
  for (double ti : t) m.push_back(3.0 * std::exp(-2.0 * ti));
  const DecayFit f = fit_decay(t, m);
  EXPECT_NEAR(f.alpha, 2.0, 1e-12);
  EXPECT_LT(f.residual, 1e-10);
  EXPECT_NEAR(f.m, 1.0, 1e-10);
  EXPECT_EQ(f.samples, static_cast<int>(t.size()));
}

TEST(FitDecay, ConstantSeries) {
  const auto t = grid(5.0, 0.1);
  const std::vector<double> m(t.size(), 0.7);
  const DecayFit f = fit_decay(t, m);
  EXPECT_NEAR(f.alpha, 0.0, 1e-14);
  EXPECT_NEAR(f.residual, 0.0, 1e-14);
}

TEST(FitDecay, FloorAndWindowSelectSamples) {
  const auto t = grid(40.0, 0.1);
  std::vector<double> m;
  for (double ti : t) m.push_back(std::exp(-ti));
  const DecayFit f = fit_decay(t, m, FitWindow{1.0, 10.0});
  EXPECT_NEAR(f.alpha, 1.0, 1e-10);
  EXPECT_NEAR(f.t_begin, 1.0, 1e-12);
  EXPECT_NEAR(f.t_end, 10.0, 1e-12);
  // Only samples above the floor enter the default fit.
  const DecayFit g = fit_decay(t, m);
  EXPECT_LE(g.t_end, -std::log(kDecayFloor) + 0.1);
}

TEST(FitDecay, TooFewSamples) {
  const std::vector<double> t{0.0, 1.0, 2.0};
  const std::vector<double> m{1.0, 0.5, 0.25};
  EXPECT_THROW(fit_decay(t, m), FitError);
  EXPECT_THROW(fit_decay(t, std::vector<double>{1.0}), ConfigError);
}

TEST(DecayWindow, StopsAtRelativeLevel) {
  const auto t = grid(40.0, 0.1);
  std::vector<double> m;
  for (double ti : t) m.push_back(std::exp(-ti));
  const FitWindow w = decay_window(t, m, 1e-8);
  EXPECT_NEAR(w.end, -std::log(1e-8), 0.11);
}

TEST(SupOver, Window) {
  const std::vector<double> t{0, 1, 2, 3, 4};
  const std::vector<double> x{5, -3, 2, -1, 0.5};
  EXPECT_DOUBLE_EQ(sup_over(t, x, 1.0, 4.0), 3.0);
  EXPECT_DOUBLE_EQ(sup_over(t, x, 2.5, 4.0), 1.0);
}

TEST(SettlingTime, EarliestTimeAfterWhichSmall) {
  const std::vector<double> t{0, 1, 2, 3, 4};
  EXPECT_EQ(settling_time(t, std::vector<double>{1, 0.05, 0.2, 0.01, 0.0}, 0.1), 3.0);
  EXPECT_EQ(settling_time(t, std::vector<double>{0, 0, 0, 0, 0}, 0.1), 0.0);
  EXPECT_FALSE(settling_time(t, std::vector<double>{0, 0, 0, 0, 1}, 0.1).has_value());
}

TEST(Median, CurvesAndScalars) {
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  const auto c = median_curve({{1, 2, 3}, {3, 2, 1}, {2, 2, 2}});
  EXPECT_EQ(c, (std::vector<double>{2, 2, 2}));
  EXPECT_THROW(median_curve({{1, 2}, {1}}), ConfigError);
}

} // namespace
} // namespace nlreg
