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
#ifndef NLREG_CLOSED_LOOP_HPP
#define NLREG_CLOSED_LOOP_HPP

#include "nlreg/dynsys.hpp"
#include "nlreg/gain.hpp"
#include "nlreg/internal_model.hpp"

#include <span>

namespace nlreg {

/// Internal-model regulator u = Gamma xi + v, v = -k y, xi' = Phi_c(xi) + G v.
struct ControllerConfig {
  InternalModel im;
  GainDesign gains;
  double k = 0.0;

  int order() const { return im.order(); }
  /// Gamma G, the first gain entry.
  double gamma_g() const { return gains.g[0]; }
  /// k - Gamma G.
  double kbar() const { return k - gamma_g(); }
  /// Dimension checks and k > 0 (k = 0 is allowed only for diagnostics).
  void validate(bool allow_zero_k = false) const;
};

struct RegulatorOutput {
  double u = 0.0;
  double v = 0.0;
};

RegulatorOutput regulator_output(const ControllerConfig& cc,
                                 std::span<const double> xi, double y);

/// Layout (z, zeta, xi, w).
System closed_loop_rhs_xi(const PlantSpec& plant, const ExosystemSpec& exo,
                          const ControllerConfig& cc);

/// Layout (z, w, eta, e) with eta = xi - G e.
System closed_loop_rhs_eta(const PlantSpec& plant, const ExosystemSpec& exo,
                           const ControllerConfig& cc);

/// Layout (z, w, xi): zero dynamics driving the internal model through
/// the steady-state input -q(z, 0, w).
System zero_dynamics_with_observer_rhs(const PlantSpec& plant,
                                       const ExosystemSpec& exo,
                                       const InternalModel& im,
                                       const GainDesign& gains);

/// (z, zeta, xi, w) -> (z, w, xi - G zeta, zeta).
Vec xi_state_to_eta(const Vec& x, int n, int r, const Vec& g);
/// Inverse of xi_state_to_eta.
Vec eta_state_to_xi(const Vec& x, int n, int r, const Vec& g);

} // namespace nlreg

#endif // NLREG_CLOSED_LOOP_HPP
