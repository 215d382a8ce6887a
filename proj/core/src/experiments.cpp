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
#include "nlreg/experiments.hpp"

#include "nlreg/errors.hpp"
#include "nlreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Independent streams per experiment family from the one scenario seed.
constexpr std::uint64_t kLemma1Salt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kRegulationSalt = 0xbf58476d1ce4e5b9ULL;

void require_scenario(const Scenario& sc) {
  if (!sc.attractor || !sc.tau || !sc.index) {
    throw PreconditionError("experiment: scenario is missing its attractor estimate");
  }
}

int stride_for(double every, double dt) {
  return std::max(1, static_cast<int>(std::lround(every / dt)));
}

std::optional<DecayFit> try_fit(const std::vector<double>& t,
                                const std::vector<double>& mag) {
  if (t.empty()) return std::nullopt;
  try {
    return fit_decay(t, mag, decay_window(t, mag));
  } catch (const FitError&) {
    return std::nullopt;
  }
}

// |xi - tau(z, w)| for an observer-layout state (z, w, xi).
double chi_norm_zwxi(const TauChain& tau, const Vec& x, int m, int d) {
  Vec t(d);
  tau.evaluate({x.data(), static_cast<std::size_t>(m)}, as_span(t));
  return (x.segment(m, d) - t).norm();
}

// Graph distance of an observer-layout state (z, w, xi).
double distance_zwxi(const GraphIndex& index, const Vec& x, int m, int d) {
  return index.distance(std::span<const double>(x.data(), static_cast<std::size_t>(m)),
                        std::span<const double>(x.data() + m, static_cast<std::size_t>(d)));
}

int spread_index(int k, int count, int size) {
  return static_cast<int>((static_cast<long>(k) * size) / count);
}

} // namespace

double Lemma1Report::chi_rate() const { return chi_fit ? chi_fit->alpha : -kInf; }

bool Lemma1Report::passed() const {
  return runs > 0 && failed_runs == 0 && max_terminal_distance < tol_attract;
}

Lemma1Report lemma1_experiment(const Scenario& sc, const InternalModel& im,
                               const GainDesign& gains, const Lemma1Options& options) {
  require_scenario(sc);
  const int n = sc.n();
  const int r = sc.r();
  const int d = sc.d();
  const int m = n + r;
  sc.sets.validate(n, d);
  const int runs = options.runs > 0 ? options.runs : sc.sets.runs;
  const System sys = zero_dynamics_with_observer_rhs(sc.plant, sc.exo, im, gains);

  Rng rng(sc.sets.seed ^ kLemma1Salt);
  std::vector<Vec> inits(static_cast<std::size_t>(runs));
  for (auto& x0 : inits) {
    x0.resize(m + d);
    x0.head(n) = rng.sample(sc.sets.z_box);
    x0.segment(n, r) = sc.exo.project(rng.sample(sc.exo.w_box));
    x0.tail(d) = rng.sample(sc.sets.xi_box);
  }

  IntegratorOptions io = options.integrator;
  io.output_dt = options.output_dt;
  const int stride = stride_for(options.distance_dt, options.output_dt);

  Lemma1Report rep;
  rep.runs = runs;
  rep.tol_attract = options.tol_attract;
  rep.terminal_distance.assign(static_cast<std::size_t>(runs), kInf);
  std::vector<std::vector<double>> chi(static_cast<std::size_t>(runs));
  std::vector<std::vector<double>> dist(static_cast<std::size_t>(runs));
  std::vector<std::vector<double>> dist_t(static_cast<std::size_t>(runs));
  std::vector<std::vector<double>> chi_t(static_cast<std::size_t>(runs));
  std::vector<char> failed(static_cast<std::size_t>(runs), 0);
  std::vector<std::string> why(static_cast<std::size_t>(runs));

  parallel_for(runs, [&](int k) {
    Trajectory traj;
    try {
      traj = integrate(sys, inits[k], 0.0, options.horizon, io);
    } catch (const IntegrationError& e) {
      failed[k] = 1;
      why[k] = e.what();
      return;
    }
    chi[k].resize(traj.size());
    for (int i = 0; i < traj.size(); ++i) {
      chi[k][i] = chi_norm_zwxi(*sc.tau, traj.state(i), m, d);
    }
    chi_t[k] = traj.t;
    if (options.compute_distance) {
      for (int i = 0; i < traj.size(); i += stride) {
        const Vec x = traj.state(i);
        dist_t[k].push_back(traj.t[i]);
        dist[k].push_back(distance_zwxi(*sc.index, x, m, d));
      }
      if ((traj.size() - 1) % stride != 0) {
        const Vec x = traj.final_state();
        dist_t[k].push_back(traj.t.back());
        dist[k].push_back(distance_zwxi(*sc.index, x, m, d));
      }
      rep.terminal_distance[k] = dist[k].back();
    } else {
      rep.terminal_distance[k] = chi[k].back();
    }
  });

  std::vector<std::vector<double>> ok_chi;
  std::vector<std::vector<double>> ok_dist;
  for (int k = 0; k < runs; ++k) {
    if (failed[k]) {
      ++rep.failed_runs;
      if (rep.message.empty()) rep.message = why[k];
      continue;
    }
    if (rep.chi_t.empty()) rep.chi_t = chi_t[k];
    if (rep.distance_t.empty()) rep.distance_t = dist_t[k];
    ok_chi.push_back(std::move(chi[k]));
    if (options.compute_distance) ok_dist.push_back(std::move(dist[k]));
  }
  for (double v : rep.terminal_distance) {
    if (!(v <= rep.max_terminal_distance)) rep.max_terminal_distance = v;
  }
  rep.median_chi = median_curve(ok_chi);
  rep.chi_fit = try_fit(rep.chi_t, rep.median_chi);
  if (options.compute_distance) {
    rep.median_distance = median_curve(ok_dist);
    rep.distance_fit = try_fit(rep.distance_t, rep.median_distance);
  }
  return rep;
}

InvarianceReport invariance_experiment(const Scenario& sc, const InternalModel& im,
                                       const GainDesign& gains,
                                       const InvarianceOptions& options) {
  require_scenario(sc);
  const int m = sc.n() + sc.r();
  const int d = sc.d();
  const System sys = zero_dynamics_with_observer_rhs(sc.plant, sc.exo, im, gains);
  const AttractorEstimate& a0 = *sc.attractor;
  const int count = std::min(options.points, a0.size());
  IntegratorOptions io = options.integrator;
  io.output_dt = options.check_dt;

  std::vector<double> worst(static_cast<std::size_t>(count), 0.0);
  std::vector<double> worst_chi(static_cast<std::size_t>(count), 0.0);
  parallel_for(count, [&](int k) {
    const Vec p = a0.point(spread_index(k, count, a0.size()));
    Vec x0(m + d);
    x0.head(m) = p;
    x0.tail(d) = (*sc.tau)(p);
    Trajectory traj;
    try {
      traj = integrate(sys, x0, 0.0, options.horizon, io);
    } catch (const IntegrationError&) {
      worst[k] = kInf;
      return;
    }
    for (int i = 0; i < traj.size(); ++i) {
      const Vec x = traj.state(i);
      const double dist = distance_zwxi(*sc.index, x, m, d);
      worst[k] = std::max(worst[k], dist);
      worst_chi[k] = std::max(worst_chi[k], chi_norm_zwxi(*sc.tau, x, m, d));
    }
  });
  InvarianceReport rep;
  rep.points = count;
  rep.tol = options.tol;
  for (int k = 0; k < count; ++k) {
    rep.max_distance = std::max(rep.max_distance, worst[k]);
    rep.max_chi = std::max(rep.max_chi, worst_chi[k]);
  }
  return rep;
}

bool Lemma2Report::passed() const {
  return !per_size.empty() && min_alpha >= alpha_req && rate_ratio <= ratio_max;
}

Lemma2Report lemma2_experiment(const Scenario& sc, const InternalModel& im,
                               const GainDesign& gains, const Lemma2Options& options) {
  require_scenario(sc);
  if (!sc.exponentially_attractive) {
    throw PreconditionError("lemma2_experiment: scenario is not flagged exponentially attractive");
  }
  if (options.sizes.empty() || options.runs_per_size < 1) {
    throw ConfigError("lemma2_experiment: need perturbation sizes and runs");
  }
  const int n = sc.n();
  const int r = sc.r();
  const int d = sc.d();
  const int m = n + r;
  const AttractorEstimate& a0 = *sc.attractor;
  const System sys = zero_dynamics_with_observer_rhs(sc.plant, sc.exo, im, gains);

  // Base points and directions are shared by every size.
  const int runs = options.runs_per_size;
  Rng rng(options.seed);
  std::vector<Vec> bases(static_cast<std::size_t>(runs));
  std::vector<Vec> dirs(static_cast<std::size_t>(runs));
  for (int k = 0; k < runs; ++k) {
    bases[k] = a0.point(spread_index(k, runs, a0.size()));
    dirs[k] = rng.unit_vector(n + d);
  }

  const int sizes = static_cast<int>(options.sizes.size());
  std::vector<Vec> inits(static_cast<std::size_t>(sizes * runs));
  for (int s = 0; s < sizes; ++s) {
    const double delta = options.sizes[s];
    if (!(delta > 0.0)) throw ConfigError("lemma2_experiment: sizes must be positive");
    for (int k = 0; k < runs; ++k) {
      Vec x0(m + d);
      x0.head(m) = bases[k];
      x0.head(n) += delta * dirs[k].head(n);
      x0.tail(d) = (*sc.tau)(bases[k]) + delta * dirs[k].tail(d);
      if (!sc.sets.xi_box.contains(Vec(x0.tail(d)))) {
        throw PreconditionError("lemma2_experiment: perturbed xi leaves the Xi box");
      }
      if (!sc.sets.z_box.contains(Vec(x0.head(n)))) {
        throw PreconditionError("lemma2_experiment: perturbed z leaves the Z box");
      }
      inits[s * runs + k] = std::move(x0);
    }
  }

  IntegratorOptions io = options.integrator;
  io.output_dt = options.sample_dt;
  std::vector<double> alphas(inits.size(), -kInf);
  std::vector<std::string> notes(inits.size());
  parallel_for(static_cast<int>(inits.size()), [&](int j) {
    Trajectory traj;
    try {
      traj = integrate(sys, inits[j], 0.0, options.window, io);
    } catch (const IntegrationError& e) {
      notes[j] = e.what();
      return;
    }
    std::vector<double> dist(traj.size());
    for (int i = 0; i < traj.size(); ++i) {
      const Vec x = traj.state(i);
      dist[i] = distance_zwxi(*sc.index, x, m, d);
    }
    try {
      alphas[j] = fit_decay(traj.t, dist, FitWindow{0.0, options.window}).alpha;
    } catch (const FitError& e) {
      notes[j] = e.what();
    }
  });

  Lemma2Report rep;
  rep.alpha_req = options.alpha_req;
  rep.ratio_max = options.ratio_max;
  rep.min_alpha = kInf;
  double lo = kInf;
  double hi = -kInf;
  for (int s = 0; s < sizes; ++s) {
    Lemma2SizeResult res;
    res.size = options.sizes[s];
    res.alphas.assign(alphas.begin() + s * runs, alphas.begin() + (s + 1) * runs);
    res.median_alpha = median(res.alphas);
    res.min_alpha = *std::min_element(res.alphas.begin(), res.alphas.end());
    rep.min_alpha = std::min(rep.min_alpha, res.min_alpha);
    lo = std::min(lo, res.median_alpha);
    hi = std::max(hi, res.median_alpha);
    rep.per_size.push_back(std::move(res));
  }
  rep.rate_ratio = lo > 0.0 ? hi / lo : kInf;
  for (const auto& note : notes) {
    if (!note.empty()) {
      rep.message = note;
      break;
    }
  }
  return rep;
}

int RunReport::failed_runs() const {
  return static_cast<int>(std::count_if(per_run.begin(), per_run.end(),
                                        [](const RunMetrics& m) { return m.failed; }));
}

bool RunReport::practical() const {
  if (per_run.empty() || failed_runs() > 0) return false;
  return std::all_of(per_run.begin(), per_run.end(),
                     [](const RunMetrics& m) { return m.t_bar.has_value(); });
}

std::vector<RegulationInit> sample_regulation_inits(const Scenario& sc, int runs,
                                                    std::uint64_t seed) {
  Rng rng(seed ^ kRegulationSalt);
  std::vector<RegulationInit> out(static_cast<std::size_t>(runs));
  for (auto& init : out) {
    init.z = rng.sample(sc.sets.z_box);
    init.e = rng.sample(sc.sets.e_interval);
    init.xi = rng.sample(sc.sets.xi_box);
    init.w = sc.exo.project(rng.sample(sc.exo.w_box));
  }
  return out;
}

Signals closed_loop_signals(const Scenario& sc, const ControllerConfig& cc,
                            const Trajectory& traj, int distance_stride) {
  const int n = sc.n();
  const int r = sc.r();
  const int d = sc.d();
  Signals s;
  const int count = traj.size();
  s.t = traj.t;
  s.e.resize(count);
  s.u.resize(count);
  s.v.resize(count);
  s.chi_norm.resize(count);
  s.graph_dist.assign(static_cast<std::size_t>(count), kNaN);
  Vec zw(n + r);
  Vec t(d);
  for (int i = 0; i < count; ++i) {
    const auto col = traj.x.col(i);
    const double zeta = col[n];
    const Vec xi = col.segment(n + 1, d);
    zw.head(n) = col.head(n);
    zw.tail(r) = col.segment(n + 1 + d, r);
    const RegulatorOutput out = regulator_output(cc, as_span(xi), zeta);
    s.e[i] = zeta;
    s.u[i] = out.u;
    s.v[i] = out.v;
    sc.tau->evaluate(as_span(zw), as_span(t));
    s.chi_norm[i] = (xi - t).norm();
    if (distance_stride > 0 && (i % distance_stride == 0 || i + 1 == count)) {
      s.graph_dist[i] = sc.index->distance(zw, xi);
    }
  }
  return s;
}

RunReport regulation_experiment(const Scenario& sc, const ControllerConfig& cc,
                                const RegulationOptions& options) {
  require_scenario(sc);
  cc.validate();
  if (!(cc.kbar() > 0.0)) {
    throw ConfigError("regulation_experiment: k - Gamma G must be positive");
  }
  const int n = sc.n();
  const int d = sc.d();
  sc.sets.validate(n, d);
  const int runs = options.runs > 0 ? options.runs : sc.sets.runs;
  const System sys = closed_loop_rhs_xi(sc.plant, sc.exo, cc);
  const std::vector<RegulationInit> inits = sample_regulation_inits(sc, runs, sc.sets.seed);

  RunReport rep;
  rep.scenario = sc.id;
  rep.d = d;
  rep.kappa = cc.gains.kappa;
  rep.k = cc.k;
  rep.kbar = cc.kbar();
  rep.bound_c = cc.im.driver().bound();
  rep.lipschitz = cc.im.driver().lipschitz();
  rep.kappa_lb = cc.gains.kappa_lb;
  rep.epsilon = options.epsilon;
  rep.epsilon_asym = options.epsilon_asym;
  rep.epsilon_fail = options.epsilon_fail;
  rep.horizon = options.horizon;
  rep.tail_begin = options.tail_begin;
  rep.runs = runs;
  rep.per_run.resize(static_cast<std::size_t>(runs));
  rep.integrator.method = options.integrator.method;
  rep.integrator.step = options.integrator.step;
  rep.integrator.rtol = options.integrator.rtol;
  rep.integrator.atol = options.integrator.atol;

  const IntegratorOptions io = options.integrator;
  const int stride = stride_for(options.distance_dt, io.output_dt);
  std::vector<Trajectory> trajs(static_cast<std::size_t>(runs));
  std::vector<std::vector<double>> e_abs(static_cast<std::size_t>(runs));
  std::vector<std::vector<double>> chi(static_cast<std::size_t>(runs));
  std::vector<std::vector<double>> dist(static_cast<std::size_t>(runs));
  std::vector<double> grid;
  std::vector<double> dist_grid;

  parallel_for(runs, [&](int k) {
    const RegulationInit& init = inits[k];
    Vec x0(n + 1 + d + sc.r());
    x0.head(n) = init.z;
    x0[n] = init.e;
    x0.segment(n + 1, d) = init.xi;
    x0.tail(sc.r()) = init.w;
    RunMetrics& met = rep.per_run[k];
    try {
      trajs[k] = integrate(sys, x0, 0.0, options.horizon, io);
    } catch (const IntegrationError& e) {
      met.failed = true;
      met.failure = e.what();
      met.tail_sup = kInf;
      trajs[k] = e.partial();
      return;
    }
    const Signals sig = closed_loop_signals(sc, cc, trajs[k], stride);
    met.t_bar = settling_time(sig.t, sig.e, options.epsilon);
    met.tail_sup = sup_over(sig.t, sig.e, options.tail_begin, options.horizon);
    e_abs[k].resize(sig.e.size());
    for (std::size_t i = 0; i < sig.e.size(); ++i) e_abs[k][i] = std::abs(sig.e[i]);
    chi[k] = sig.chi_norm;
    for (std::size_t i = 0; i < sig.graph_dist.size(); ++i) {
      if (!std::isnan(sig.graph_dist[i])) dist[k].push_back(sig.graph_dist[i]);
    }
  });

  std::vector<std::vector<double>> ok_e;
  std::vector<std::vector<double>> ok_chi;
  std::vector<std::vector<double>> ok_dist;
  bool all_settled = true;
  for (int k = 0; k < runs; ++k) {
    const RunMetrics& met = rep.per_run[k];
    rep.steps += trajs[k].stats.steps;
    rep.rejected += trajs[k].stats.rejected;
    if (!(met.tail_sup <= rep.tail_sup_e)) rep.tail_sup_e = met.tail_sup;
    if (met.failed) {
      all_settled = false;
      continue;
    }
    if (grid.empty()) {
      grid = trajs[k].t;
      for (int i = 0; i < trajs[k].size(); ++i) {
        if (i % stride == 0 || i + 1 == trajs[k].size()) dist_grid.push_back(grid[i]);
      }
    }
    if (met.t_bar) {
      rep.t_bar_max = std::max(rep.t_bar_max.value_or(-kInf), *met.t_bar);
    } else {
      all_settled = false;
    }
    ok_e.push_back(std::move(e_abs[k]));
    ok_chi.push_back(std::move(chi[k]));
    ok_dist.push_back(std::move(dist[k]));
  }
  if (!all_settled) rep.t_bar_max.reset();
  rep.integrator.steps = rep.steps;
  rep.integrator.rejected = rep.rejected;

  if (sc.exponentially_attractive) rep.e_fit = try_fit(grid, median_curve(ok_e));
  rep.chi_fit = try_fit(grid, median_curve(ok_chi));
  rep.distance_fit = try_fit(dist_grid, median_curve(ok_dist));
  if (options.keep_trajectories) rep.trajectories = std::move(trajs);
  return rep;
}

LinearDriverFit fit_linear_driver(const TauChain& tau, const AttractorEstimate& a0) {
  const int d = tau.order();
  const int count = a0.size();
  if (count < d) throw FitError("fit_linear_driver: fewer cloud points than unknowns");
  Mat design(count, d);
  Vec target(count);
  std::vector<std::vector<double>> ext(static_cast<std::size_t>(count));
  parallel_for(count, [&](int j) { ext[j] = tau.extended(as_span(a0.point(j))); });
  for (int j = 0; j < count; ++j) {
    for (int i = 0; i < d; ++i) design(j, i) = ext[j][i];
    target[j] = -ext[j][d];
  }
  LinearDriverFit fit;
  fit.a = design.colPivHouseholderQr().solve(target);
  fit.rms_residual = std::sqrt((design * fit.a - target).squaredNorm() / count);
  fit.samples = count;
  return fit;
}

SmoothMap linear_driver_map(const Vec& a) {
  const int d = static_cast<int>(a.size());
  return SmoothMap::generic(d, 1, [a](auto eta, auto out) {
    using T = std::remove_cvref_t<decltype(out[0])>;
    T acc = a[0] * eta[0];
    for (Eigen::Index i = 1; i < a.size(); ++i) acc += a[i] * eta[i];
    out[0] = acc;
  });
}

} // namespace nlreg
