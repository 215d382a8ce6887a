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
#include "nlreg/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <limits>

namespace nlreg {
namespace {

// Tail values below this are integrator-noise level and not compared.
constexpr double kNoiseFloor = 1e-10;

RegulatorDesign design(const std::string& id, bool baseline = false,
                       std::optional<int> d = std::nullopt) {
  DesignOptions o;
  o.linear_baseline = baseline;
  o.d = d;
  return design_regulator(find_benchmark(id), o);
}

TEST(Invariance, GraphIsInvariantOnEveryBenchmark) {
  for (const std::string id : {"harmonic", "vdp", "static"}) {
    const RegulatorDesign des = design(id);
    const InvarianceReport rep = invariance_experiment(des.scenario, des.im, des.gains);
    EXPECT_EQ(rep.points, 20) << id;
    EXPECT_LT(rep.max_chi, 1e-6) << id;
    EXPECT_LT(rep.max_distance, 1e-5) << id;
    EXPECT_TRUE(rep.passed()) << id;
  }
}

TEST(Lemma1, VanDerPolConvergesAtKappaStar) {
  const RegulatorDesign des = design("vdp");
  ASSERT_EQ(des.kappa_source, KappaSource::kSearch);
  const Lemma1Report rep = lemma1_experiment(des.scenario, des.im, des.gains);
  EXPECT_EQ(rep.runs, 50);
  EXPECT_EQ(rep.failed_runs, 0);
  EXPECT_LT(rep.max_terminal_distance, 1e-4);
  EXPECT_TRUE(rep.passed());
}

TEST(Lemma1, ChiDecaysAtTwiceTheCertifiedBound) {
  const RegulatorDesign des = design("harmonic");
  const GainDesign g = des.gains.with_kappa(2.0 * des.gains.kappa_lb);
  Lemma1Options o;
  o.runs = 10;
  o.compute_distance = false;
  const Lemma1Report rep = lemma1_experiment(des.scenario, des.im, g, o);
  EXPECT_GT(rep.chi_rate(), 0.0);
}

TEST(Lemma1, WeakGainWithAdversarialDriverReportsWithoutThrowing) {
  const RegulatorDesign base = design("vdp");
  // An anti-damped driver saturated on the same box, far below the bound.
  const SmoothMap bad = SmoothMap::generic(2, 1, [](auto eta, auto out) {
    out[0] = -40.0 * eta[0] - 40.0 * eta[1];
  });
  const Box raw = *base.scenario.tau->image_box();
  const InternalModel im(saturate(bad, raw.inflated(0.25, 1e-3), raw));
  const GainDesign g = base.gains.with_kappa(1.01);
  Lemma1Options o;
  o.runs = 5;
  o.horizon = 10.0;
  Lemma1Report rep;
  ASSERT_NO_THROW(rep = lemma1_experiment(base.scenario, im, g, o));
  EXPECT_EQ(rep.runs, 5);
  EXPECT_FALSE(rep.passed());
  if (rep.chi_fit) EXPECT_LE(rep.chi_rate(), 0.5);
}

TEST(Lemma1, ChiRateTrendOverKappaGrid) {
  // Trend check only; a decrease is reported, not failed.
  for (const std::string id : {"harmonic", "vdp", "static"}) {
    const RegulatorDesign des = design(id);
    Lemma1Options o;
    o.runs = 10;
    o.compute_distance = false;
    double prev = -std::numeric_limits<double>::infinity();
    for (double f : {1.0, 2.0, 4.0}) {
      const Lemma1Report rep =
          lemma1_experiment(des.scenario, des.im, des.gains.with_kappa(f * des.gains.kappa), o);
      ASSERT_EQ(rep.failed_runs, 0) << id;
      const double rate = rep.chi_rate();
      std::printf("%s kappa=%g chi_rate=%g\n", id.c_str(), f * des.gains.kappa, rate);
      if (rate < prev) {
        RecordProperty(id + "_rate_decreased_at_x" + std::to_string(static_cast<int>(f)), rate);
      }
      prev = rate;
    }
  }
}

TEST(Lemma2, HarmonicRatesAreUniform) {
  const RegulatorDesign des = design("harmonic");
  const Lemma2Report rep = lemma2_experiment(des.scenario, des.im, des.gains);
  ASSERT_EQ(rep.per_size.size(), 4u);
  EXPECT_GE(rep.min_alpha, 0.5);
  EXPECT_LE(rep.rate_ratio, 2.0);
  EXPECT_TRUE(rep.passed());
}

TEST(Lemma2, ZContractionGivesRateAboveHalf) {
  // f0 = -z + w1 contracts at rate 1 on its own.
  const RegulatorDesign des = design("vdp");
  const Lemma2Report rep = lemma2_experiment(des.scenario, des.im, des.gains);
  EXPECT_GE(rep.min_alpha, 0.5);
}

TEST(Lemma2, PerturbationOutsideXiBoxIsRejected) {
  const RegulatorDesign des = design("harmonic");
  Lemma2Options o;
  o.sizes = {10.0};
  EXPECT_THROW(lemma2_experiment(des.scenario, des.im, des.gains, o), PreconditionError);
}

TEST(Regulation, VanDerPolPracticalAndAsymptotic) {
  const RegulatorDesign des = design("vdp");
  const RunReport rep = regulation_experiment(des.scenario, des.controller());
  EXPECT_EQ(rep.runs, 50);
  EXPECT_EQ(rep.failed_runs(), 0);
  ASSERT_TRUE(rep.t_bar_max.has_value());
  EXPECT_LE(*rep.t_bar_max, 30.0);
  EXPECT_LT(rep.tail_sup_e, 1e-2);
  EXPECT_TRUE(rep.practical());
  EXPECT_TRUE(rep.asymptotic());
}

TEST(Regulation, TailDoesNotGrowWithK) {
  for (const std::string id : {"harmonic", "vdp", "static"}) {
    const RegulatorDesign des = design(id);
    RegulationOptions o;
    o.runs = 10;
    double prev = std::numeric_limits<double>::infinity();
    for (double f : {1.0, 2.0, 4.0}) {
      const RegulatorDesign k = redesign(des, des.gains.kappa, f * des.k);
      const RunReport rep = regulation_experiment(k.scenario, k.controller(), o);
      const double tail = std::max(rep.tail_sup_e, kNoiseFloor);
      EXPECT_LE(tail, prev) << id << " k=" << k.k;
      prev = tail;
    }
  }
}

TEST(Regulation, StaticStabilizesForSmallK) {
  const RegulatorDesign des = design("static");
  for (double kbar : {0.5, 2.0}) {
    const RegulatorDesign k = redesign(des, des.gains.kappa, des.gains.g[0] + kbar);
    const RunReport rep = regulation_experiment(k.scenario, k.controller());
    EXPECT_LT(rep.tail_sup_e, 1e-6) << kbar;
  }
}

TEST(Regulation, NonPositiveKbarIsAConfigError) {
  const RegulatorDesign des = design("static");
  const RegulatorDesign k = redesign(des, des.gains.kappa, des.gains.g[0]);
  EXPECT_THROW(regulation_experiment(k.scenario, k.controller()), ConfigError);
}

TEST(Regulation, FixedStepRunsAreReproducible) {
  const RegulatorDesign des = design("harmonic");
  RegulationOptions o;
  o.runs = 4;
  o.keep_trajectories = true;
  const RunReport a = regulation_experiment(des.scenario, des.controller(), o);
  const RunReport b = regulation_experiment(des.scenario, des.controller(), o);
  ASSERT_EQ(a.trajectories.size(), b.trajectories.size());
  for (std::size_t i = 0; i < a.trajectories.size(); ++i) {
    EXPECT_EQ(a.trajectories[i].x, b.trajectories[i].x);
  }
  EXPECT_EQ(a.tail_sup_e, b.tail_sup_e);
}

TEST(LinearBaseline, HarmonicPasses) {
  const RegulatorDesign des = design("harmonic", true);
  ASSERT_TRUE(des.linear_fit.has_value());
  EXPECT_NEAR(des.linear_fit->a[0], 1.0, 1e-6);
  EXPECT_NEAR(des.linear_fit->a[1], 0.0, 1e-6);
  const RunReport rep = regulation_experiment(des.scenario, des.controller());
  EXPECT_LT(rep.tail_sup_e, 1e-4);
  EXPECT_TRUE(rep.asymptotic());
}

TEST(LinearBaseline, VanDerPolFails) {
  const RegulatorDesign des = design("vdp", true);
  const RunReport rep = regulation_experiment(des.scenario, des.controller());
  EXPECT_GE(rep.tail_sup_e, 1e-2);
  EXPECT_TRUE(rep.regulation_failed());
}

TEST(LinearBaseline, UnderOrderedHarmonicFails) {
  const RegulatorDesign des = design("harmonic", true, 1);
  EXPECT_EQ(des.scenario.d(), 1);
  const RunReport rep = regulation_experiment(des.scenario, des.controller());
  EXPECT_TRUE(rep.regulation_failed());
}

TEST(LinearBaseline, OrderOverrideNeedsBaseline) {
  DesignOptions o;
  o.d = 1;
  EXPECT_THROW(design_regulator(find_benchmark("harmonic"), o), ConfigError);
}

TEST(KappaSearch, CertifiedStartIsReturnedWhenItDecays) {
  const RegulatorDesign des = design("harmonic");
  ASSERT_TRUE(des.search.has_value());
  EXPECT_DOUBLE_EQ(des.search->kappa_star, des.search->start);
  EXPECT_DOUBLE_EQ(des.search->start, std::max(1.001, des.gains.kappa_lb));
  EXPECT_EQ(des.search->trials.size(), 1u);
}

TEST(KappaSearch, ZeroThresholdAcceptsFirstNonnegativeRate) {
  const RegulatorDesign des = design("static");
  KappaSearchOptions o;
  o.alpha_min = 0.0;
  const KappaSearchResult r = find_kappa_star(des.scenario, des.im, des.gains, o);
  EXPECT_DOUBLE_EQ(r.kappa_star, r.start);
  EXPECT_GE(r.rate, 0.0);
}

TEST(KappaSearch, HalfKappaStarIsNotBetter) {
  const RegulatorDesign des = design("vdp");
  ASSERT_TRUE(des.search.has_value());
  const double half = 0.5 * des.search->kappa_star;
  ASSERT_GT(half, 1.0);
  const Lemma1Report rep = lemma1_experiment(des.scenario, des.im, des.gains.with_kappa(half),
                                             KappaSearchOptions::default_lemma1());
  const bool fails = rep.failed_runs > 0 || rep.chi_rate() < 0.5;
  EXPECT_TRUE(fails || rep.chi_rate() < des.search->rate)
      << "rate at kappa*/2 = " << rep.chi_rate() << ", at kappa* = " << des.search->rate;
}

TEST(KappaSearch, UnreachableRateIsASearchError) {
  const RegulatorDesign des = design("static");
  KappaSearchOptions o;
  o.alpha_min = 1e6;
  o.kappa_max = 4.0;
  EXPECT_THROW(find_kappa_star(des.scenario, des.im, des.gains, o), SearchError);
}

TEST(Signals, MatchRunMetrics) {
  const RegulatorDesign des = design("harmonic");
  RegulationOptions o;
  o.runs = 2;
  o.keep_trajectories = true;
  const RunReport rep = regulation_experiment(des.scenario, des.controller(), o);
  const Signals s = closed_loop_signals(des.scenario, des.controller(), rep.trajectories[0], 100);
  EXPECT_EQ(s.t.size(), rep.trajectories[0].t.size());
  EXPECT_DOUBLE_EQ(sup_over(s.t, s.e, o.tail_begin, o.horizon), rep.per_run[0].tail_sup);
  EXPECT_FALSE(std::isnan(s.graph_dist[0]));
  EXPECT_TRUE(std::isnan(s.graph_dist[1]));
}

} // namespace
} // namespace nlreg
