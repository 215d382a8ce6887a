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
#ifndef NLREG_EXPERIMENTS_HPP
#define NLREG_EXPERIMENTS_HPP

#include "nlreg/analysis.hpp"
#include "nlreg/attractor.hpp"
#include "nlreg/closed_loop.hpp"
#include "nlreg/dynsys.hpp"
#include "nlreg/gain.hpp"
#include "nlreg/integrate.hpp"
#include "nlreg/internal_model.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nlreg {

/// Everything an experiment needs besides the controller.
struct Scenario {
  std::string id;
  PlantSpec plant;
  ExosystemSpec exo;
  ScenarioSets sets;
  std::shared_ptr<const AttractorEstimate> attractor;
  std::shared_ptr<const TauChain> tau;
  std::shared_ptr<const GraphIndex> index;
  bool exponentially_attractive = false;

  int n() const { return plant.n; }
  int r() const { return plant.r; }
  int d() const { return tau->order(); }
};

// ---------------------------------------------------------------------------
// Graph convergence of the zero dynamics driving the internal model.

struct Lemma1Options {
  double horizon = 40.0;
  int runs = 0;                ///< 0 uses the scenario sample count
  double output_dt = 0.005;    ///< grid of |chi|
  double distance_dt = 0.5;    ///< grid of graph-distance evaluations
  double tol_attract = 1e-4;
  bool compute_distance = true;
  IntegratorOptions integrator{};
};

struct Lemma1Report {
  int runs = 0;
  int failed_runs = 0;               ///< integration failures
  std::vector<double> terminal_distance;
  double max_terminal_distance = 0.0;
  std::vector<double> distance_t;    ///< grid of the median distance curve
  std::vector<double> median_distance;
  std::optional<DecayFit> distance_fit;
  std::vector<double> chi_t;
  std::vector<double> median_chi;
  std::optional<DecayFit> chi_fit;
  double tol_attract = 0.0;
  std::string message;

  /// Fitted rate of the median |chi| curve; -inf without a fit.
  double chi_rate() const;
  bool passed() const;
};

Lemma1Report lemma1_experiment(const Scenario& sc, const InternalModel& im,
                               const GainDesign& gains,
                               const Lemma1Options& options = {});

struct InvarianceOptions {
  int points = 20;
  double horizon = 50.0;
  double check_dt = 0.5;
  double tol = 1e-5;
  IntegratorOptions integrator{};
};

struct InvarianceReport {
  int points = 0;
  double max_distance = 0.0;
  double max_chi = 0.0;
  double tol = 0.0;
  bool passed() const { return max_distance < tol; }
};

/// xi0 = tau(p) at spread cloud points p.
InvarianceReport invariance_experiment(const Scenario& sc, const InternalModel& im,
                                       const GainDesign& gains,
                                       const InvarianceOptions& options = {});

// ---------------------------------------------------------------------------
// Local exponential attractiveness.

struct Lemma2Options {
  std::vector<double> sizes{1e-1, 1e-2, 1e-3, 1e-4};
  int runs_per_size = 5;
  double window = 6.0;
  double sample_dt = 0.1;
  double alpha_req = 0.5;
  double ratio_max = 2.0;
  std::uint64_t seed = 11;
  IntegratorOptions integrator{};
};

struct Lemma2SizeResult {
  double size = 0.0;
  std::vector<double> alphas;
  double median_alpha = 0.0;
  double min_alpha = 0.0;
};

struct Lemma2Report {
  std::vector<Lemma2SizeResult> per_size;
  double min_alpha = 0.0;
  double rate_ratio = 0.0; ///< max / min of the per-size median rates
  double alpha_req = 0.0;
  double ratio_max = 0.0;
  std::string message;
  bool passed() const;
};

/// Throws PreconditionError when the benchmark is not flagged exponentially
/// attractive or a perturbed xi leaves the Xi box.
Lemma2Report lemma2_experiment(const Scenario& sc, const InternalModel& im,
                               const GainDesign& gains,
                               const Lemma2Options& options = {});

// ---------------------------------------------------------------------------
// Closed-loop regulation.

struct RegulationOptions {
  double epsilon = 1e-2;
  double epsilon_asym = 1e-4;
  double epsilon_fail = 1e-2;
  double horizon = 100.0;
  double tail_begin = 80.0;
  int runs = 0; ///< 0 uses the scenario sample count
  IntegratorOptions integrator{};
  double distance_dt = 1.0;      ///< graph-distance sampling for the fit
  bool keep_trajectories = false;
};

struct RunMetrics {
  std::optional<double> t_bar;
  double tail_sup = 0.0;
  bool failed = false;
  std::string failure;
};

/// Flat summary of one regulation experiment. Verdicts are functions of the
/// stored metrics and thresholds only.
struct RunReport {
  std::string scenario;
  bool linear_baseline = false;
  // gains
  int d = 0;
  double kappa = 0.0;
  double k = 0.0;
  double kbar = 0.0;
  double bound_c = 0.0;
  double lipschitz = 0.0;
  double kappa_lb = 0.0;
  // thresholds
  double epsilon = 0.0;
  double epsilon_asym = 0.0;
  double epsilon_fail = 0.0;
  double horizon = 0.0;
  double tail_begin = 0.0;
  // metrics
  int runs = 0;
  std::vector<RunMetrics> per_run;
  double tail_sup_e = 0.0;
  std::optional<double> t_bar_max;
  std::optional<DecayFit> e_fit;
  std::optional<DecayFit> chi_fit;
  std::optional<DecayFit> distance_fit;
  long steps = 0;
  long rejected = 0;
  IntegratorStats integrator;
  std::vector<Trajectory> trajectories;

  int failed_runs() const;
  bool practical() const;
  bool asymptotic() const { return failed_runs() == 0 && tail_sup_e < epsilon_asym; }
  /// tail sup |e| >= epsilon_fail (or a run diverged).
  bool regulation_failed() const { return failed_runs() > 0 || tail_sup_e >= epsilon_fail; }
};

/// Initial condition (z, zeta, xi, w) of a regulation run.
struct RegulationInit {
  Vec z;
  double e = 0.0;
  Vec xi;
  Vec w;
};

std::vector<RegulationInit> sample_regulation_inits(const Scenario& sc, int runs,
                                                    std::uint64_t seed);

RunReport regulation_experiment(const Scenario& sc, const ControllerConfig& cc,
                                const RegulationOptions& options = {});

/// Signals of one closed-loop trajectory in (z, zeta, xi, w) layout.
struct Signals {
  std::vector<double> t;
  std::vector<double> e;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> chi_norm;  ///< |xi - tau(z, w)|
  std::vector<double> graph_dist; ///< NaN where not evaluated
};

Signals closed_loop_signals(const Scenario& sc, const ControllerConfig& cc,
                            const Trajectory& traj, int distance_stride = 1);

// ---------------------------------------------------------------------------
// Linear comparator driver.

struct LinearDriverFit {
  Vec a; ///< f_lin(eta) = a_0 eta_1 + ... + a_{d-1} eta_d
  double rms_residual = 0.0;
  int samples = 0;
};

/// Least squares for phi^(d) = -f_lin(phi, ..., phi^(d-1)) over the cloud.
LinearDriverFit fit_linear_driver(const TauChain& tau, const AttractorEstimate& a0);

SmoothMap linear_driver_map(const Vec& a);

} // namespace nlreg

#endif // NLREG_EXPERIMENTS_HPP
