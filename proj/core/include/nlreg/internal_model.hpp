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
#ifndef NLREG_INTERNAL_MODEL_HPP
#define NLREG_INTERNAL_MODEL_HPP

#include "nlreg/dynsys.hpp"
#include "nlreg/smooth_map.hpp"
#include "nlreg/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace nlreg {

class AttractorEstimate;

/**
 * The map (z, w) -> (tau_1, ..., tau_d) with tau_1 = -q(z, 0, w) and
 * tau_{i+1} the Lie derivative of tau_i along the zero dynamics. Components
 * are the successive time derivatives of the steady-state input along the
 * zero-dynamics flow, computed by jet propagation.
 */
class TauChain {
public:
  TauChain(const PlantSpec& plant, const ExosystemSpec& exo, int d);

  int order() const { return d_; }
  int point_dim() const { return n_ + r_; }
  int n() const { return n_; }

  void evaluate(std::span<const double> zw, std::span<double> tau) const;
  Vec operator()(const Vec& zw) const;
  /// (tau_1, ..., tau_d, tau_{d+1}); the last entry is the d-th derivative.
  std::vector<double> extended(std::span<const double> zw) const;

  /// The scalar field -q(z, 0, w) on R^{n+r}.
  const SmoothMap& steady_input() const { return steady_input_; }
  const SmoothMap& zero_dynamics() const { return field_; }

  /// Raw bounding box of tau over an attractor estimate, once computed.
  const std::optional<Box>& image_box() const { return image_box_; }
  void set_image_box(Box box) { image_box_ = std::move(box); }

private:
  int d_;
  int n_;
  int r_;
  SmoothMap steady_input_;
  SmoothMap field_;
  std::optional<Box> image_box_;
};

TauChain build_tau(const PlantSpec& plant, const ExosystemSpec& exo, int d);

struct GridOptions {
  /// Points per axis for d <= 3; higher orders use 64^3 points in total.
  int points_per_axis = 64;
  /// Points per axis of the local refinement grid around the coarse argmax.
  int refine_points = 16;
};

struct DriverBounds {
  double bound = 0.0;     ///< sup |f| over the box
  double lipschitz = 0.0; ///< sup of the gradient 2-norm over the box
};

/// Grid maximization of |f| and |grad f| over a box, gradients from jets.
DriverBounds grid_bounds(const SmoothMap& f, const Box& box,
                         const GridOptions& options = {});

/**
 * f_c = f o clamp_S. Globally bounded by C and globally Lipschitz with
 * constant L (clamping onto a convex box is 1-Lipschitz); agrees with f on S.
 */
class SaturatedDriver {
public:
  SaturatedDriver(SmoothMap f, Box s_box, DriverBounds bounds);

  double operator()(std::span<const double> eta) const;
  double operator()(const Vec& eta) const { return (*this)(as_span(eta)); }

  int order() const { return box_.dim(); }
  const SmoothMap& driver() const { return f_; }
  const Box& box() const { return box_; }
  double bound() const { return bounds_.bound; }
  double lipschitz() const { return bounds_.lipschitz; }

private:
  SmoothMap f_;
  Box box_;
  DriverBounds bounds_;
};

/// Throws ConfigError unless s_box strictly contains image_box on every axis.
SaturatedDriver saturate(const SmoothMap& f, const Box& s_box,
                         const std::optional<Box>& image_box = std::nullopt,
                         const GridOptions& options = {});

/// eta' = Phi_c(eta) = (eta_2, ..., eta_d, -f_c(eta)) with output Gamma eta = eta_1.
class InternalModel {
public:
  explicit InternalModel(SaturatedDriver driver);

  int order() const { return driver_.order(); }
  const SaturatedDriver& driver() const { return driver_; }

  void phi_c(std::span<const double> eta, std::span<double> out) const;
  Vec phi_c(const Vec& eta) const;
  static double gamma(std::span<const double> eta) { return eta[0]; }

private:
  SaturatedDriver driver_;
};

/// Convenience wrapper: (eta_2, ..., eta_d, -f_c(eta)).
Vec phi_c(const InternalModel& im, const Vec& eta);

struct InternalModelCheckOptions {
  int trajectories = 10;  ///< attractor points used as initial conditions
  double horizon = 10.0;  ///< length of each sampled trajectory
  double sample_dt = 0.1; ///< spacing of residual evaluations
  double fd_step = 1e-4;  ///< central-difference step in time
  double tol = 1e-5;
};

struct InternalModelResidual {
  double chain = 0.0;  ///< max |d/dt tau - Phi_c(tau)| along A0 trajectories
  double output = 0.0; ///< max |Gamma tau + q(z, 0, w)| on the cloud
  int samples = 0;
  double tol = 0.0;
  bool passed() const { return chain < tol && output < tol; }
};

InternalModelResidual verify_internal_model(
    const InternalModel& im, const TauChain& tau, const AttractorEstimate& a0,
    const PlantSpec& plant, const InternalModelCheckOptions& options = {});

} // namespace nlreg

#endif // NLREG_INTERNAL_MODEL_HPP
