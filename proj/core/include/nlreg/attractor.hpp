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
#ifndef NLREG_ATTRACTOR_HPP
#define NLREG_ATTRACTOR_HPP

#include "nlreg/dynsys.hpp"
#include "nlreg/integrate.hpp"
#include "nlreg/internal_model.hpp"
#include "nlreg/types.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace nlreg {

struct AttractorOptions {
  double transient_time = 20.0;
  double sample_time = 10.0;
  int n_samples = 100;
  double sample_dt = 0.05;
  std::uint64_t seed = 7;
  /// Fixed-step RK4 so that every retained point is an integrator state.
  double step = 1e-3;
};

/**
 * Point cloud approximating the omega-limit set of Z x W under the zero
 * dynamics. Columns are (z, w) points.
 */
class AttractorEstimate {
public:
  AttractorEstimate(Mat points, System zero_dynamics, int n,
                    const AttractorOptions& options);

  int size() const { return static_cast<int>(points_.cols()); }
  int dim() const { return static_cast<int>(points_.rows()); }
  int n() const { return n_; }
  const Mat& points() const { return points_; }
  Vec point(int i) const { return points_.col(i); }
  const System& zero_dynamics() const { return zero_dynamics_; }
  const AttractorOptions& options() const { return options_; }

private:
  Mat points_;
  System zero_dynamics_;
  int n_;
  AttractorOptions options_;
};

/// Throws AssumptionViolation when a zero-dynamics trajectory diverges.
AttractorEstimate estimate_attractor(const PlantSpec& plant,
                                     const ExosystemSpec& exo,
                                     const ScenarioSets& sets,
                                     const AttractorOptions& options = {});

/// Bounding box of tau over the cloud, half-widths inflated by `inflation`
/// with an absolute floor. Also stored into the chain's image box (raw).
Box tau_image_box(TauChain& tau, const AttractorEstimate& a0, double inflation,
                  double abs_floor = 1e-3);
/// Raw componentwise bounding box of tau over the cloud.
Box tau_bounding_box(const TauChain& tau, const AttractorEstimate& a0);

/**
 * Nearest-point queries against the cloud under the sum metric
 * |(z, w) - p| + |xi - tau(p)|.
 *
 * With refinement the nearest cloud point is additionally moved along its
 * own zero-dynamics orbit by up to one sampling interval either way; the
 * result is never larger than the plain cloud minimum.
 */
class GraphIndex {
public:
  GraphIndex(const AttractorEstimate& a0, const TauChain& tau);
  /// State-space only: the xi term is dropped.
  explicit GraphIndex(const AttractorEstimate& a0);

  int size() const { return static_cast<int>(points_.cols()); }
  const Mat& points() const { return points_; }
  const Mat& tau_values() const { return tau_values_; }
  bool has_tau() const { return tau_.has_value(); }

  /// Index of the cloud point minimizing the metric.
  int nearest(std::span<const double> zw, std::span<const double> xi) const;
  double distance(std::span<const double> zw, std::span<const double> xi,
                  bool refine = true) const;
  double distance(const Vec& zw, const Vec& xi, bool refine = true) const {
    return distance(as_span(zw), as_span(xi), refine);
  }

private:
  double metric(std::span<const double> zw, std::span<const double> xi,
                std::span<const double> p, std::span<const double> tp) const;
  double orbit_metric(std::span<const double> zw, std::span<const double> xi,
                      const Vec& p) const;

  Mat points_;
  Mat tau_values_;
  System zero_dynamics_;
  std::optional<TauChain> tau_;
  double sample_dt_;
};

/// graph_distance with an index built on the fly; O(cloud) tau evaluations.
double graph_distance(const TauChain& tau, const AttractorEstimate& a0,
                      const Vec& zw, const Vec& xi, bool refine = true);

struct InvarianceProxy {
  double max_distance = 0.0;
  int checked = 0;
  double tol = 0.0;
  bool passed() const { return max_distance < tol; }
};

/// Flows `count` spread cloud points for `duration` and measures how far
/// they land from the cloud.
InvarianceProxy check_forward_invariance(const AttractorEstimate& a0,
                                         double duration = 1.0,
                                         double tol = 1e-3, int count = 50);

} // namespace nlreg

#endif // NLREG_ATTRACTOR_HPP
