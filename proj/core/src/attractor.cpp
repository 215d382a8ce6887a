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
#include "nlreg/attractor.hpp"

#include "nlreg/errors.hpp"
#include "nlreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlreg {

AttractorEstimate::AttractorEstimate(Mat points, System zero_dynamics, int n,
                                     const AttractorOptions& options)
    : points_(std::move(points)), zero_dynamics_(std::move(zero_dynamics)), n_(n),
      options_(options) {
  if (points_.cols() == 0) throw PreconditionError("AttractorEstimate: empty cloud");
  if (points_.rows() != zero_dynamics_.dim()) {
    throw ConfigError("AttractorEstimate: point dimension does not match the system");
  }
}

AttractorEstimate estimate_attractor(const PlantSpec& plant,
                                     const ExosystemSpec& exo,
                                     const ScenarioSets& sets,
                                     const AttractorOptions& options) {
  plant.validate_against(exo);
  if (sets.z_box.dim() != plant.n) {
    throw ConfigError("estimate_attractor: Z box dimension != n");
  }
  if (options.n_samples < 1 || !(options.sample_dt > 0.0) ||
      !(options.transient_time >= 0.0) || !(options.sample_time >= 0.0) ||
      !(options.step > 0.0)) {
    throw ConfigError("estimate_attractor: invalid options");
  }
  const int n = plant.n;
  const int r = plant.r;
  const System zd = zero_dynamics_rhs(plant, exo);

  Rng rng(options.seed);
  std::vector<Vec> inits(static_cast<std::size_t>(options.n_samples));
  for (auto& x0 : inits) {
    x0.resize(n + r);
    x0.head(n) = rng.sample(sets.z_box);
    x0.tail(r) = exo.project(rng.sample(exo.w_box));
  }

  IntegratorOptions io;
  io.method = Method::kRk4;
  io.step = options.step;
  io.output_dt = options.sample_dt;
  const double t_end = options.transient_time + options.sample_time;

  std::vector<Mat> kept(inits.size());
  parallel_for(options.n_samples, [&](int k) {
    Trajectory traj;
    try {
      traj = integrate(zd, inits[k], 0.0, t_end, io);
    } catch (const IntegrationError& e) {
      throw AssumptionViolation(
          std::string("estimate_attractor: zero-dynamics trajectory diverged: ") +
          e.what());
    }
    int first = 0;
    while (first < traj.size() &&
           traj.t[first] < options.transient_time - 1e-9 * options.sample_dt) {
      ++first;
    }
    kept[k] = traj.x.rightCols(traj.size() - first);
  });

  Eigen::Index total = 0;
  for (const Mat& m : kept) total += m.cols();
  Mat points(n + r, total);
  Eigen::Index col = 0;
  for (const Mat& m : kept) {
    points.middleCols(col, m.cols()) = m;
    col += m.cols();
  }
  return AttractorEstimate(std::move(points), zd, n, options);
}

Box tau_bounding_box(const TauChain& tau, const AttractorEstimate& a0) {
  const int d = tau.order();
  Vec lo = Vec::Constant(d, std::numeric_limits<double>::infinity());
  Vec hi = Vec::Constant(d, -std::numeric_limits<double>::infinity());
  Vec t(d);
  for (int j = 0; j < a0.size(); ++j) {
    const Vec p = a0.point(j);
    tau.evaluate(as_span(p), as_span(t));
    lo = lo.cwiseMin(t);
    hi = hi.cwiseMax(t);
  }
  return Box(lo, hi);
}

Box tau_image_box(TauChain& tau, const AttractorEstimate& a0, double inflation,
                  double abs_floor) {
  if (inflation < 0.0) throw ConfigError("tau_image_box: negative inflation");
  const Box raw = tau_bounding_box(tau, a0);
  tau.set_image_box(raw);
  return raw.inflated(inflation, abs_floor);
}

GraphIndex::GraphIndex(const AttractorEstimate& a0, const TauChain& tau)
    : points_(a0.points()), zero_dynamics_(a0.zero_dynamics()), tau_(tau),
      sample_dt_(a0.options().sample_dt) {
  if (tau.point_dim() != a0.dim()) {
    throw ConfigError("GraphIndex: tau and cloud dimensions differ");
  }
  const int d = tau.order();
  tau_values_.resize(d, points_.cols());
  constexpr int kChunk = 256;
  const int chunks = static_cast<int>((points_.cols() + kChunk - 1) / kChunk);
  parallel_for(chunks, [&](int c) {
    const Eigen::Index end = std::min<Eigen::Index>(points_.cols(), (c + 1) * kChunk);
    Vec t(d);
    for (Eigen::Index j = static_cast<Eigen::Index>(c) * kChunk; j < end; ++j) {
      const Vec p = points_.col(j);
      tau.evaluate(as_span(p), as_span(t));
      tau_values_.col(j) = t;
    }
  });
}

GraphIndex::GraphIndex(const AttractorEstimate& a0)
    : points_(a0.points()), zero_dynamics_(a0.zero_dynamics()),
      sample_dt_(a0.options().sample_dt) {}

double GraphIndex::metric(std::span<const double> zw, std::span<const double> xi,
                          std::span<const double> p,
                          std::span<const double> tp) const {
  double a = 0.0;
  for (std::size_t i = 0; i < zw.size(); ++i) a += (zw[i] - p[i]) * (zw[i] - p[i]);
  double b = 0.0;
  if (tau_) {
    for (std::size_t i = 0; i < xi.size(); ++i) b += (xi[i] - tp[i]) * (xi[i] - tp[i]);
  }
  return std::sqrt(a) + std::sqrt(b);
}

int GraphIndex::nearest(std::span<const double> zw, std::span<const double> xi) const {
  if (static_cast<Eigen::Index>(zw.size()) != points_.rows()) {
    throw ConfigError("GraphIndex: state dimension mismatch");
  }
  if (tau_ && static_cast<Eigen::Index>(xi.size()) != tau_values_.rows()) {
    throw ConfigError("GraphIndex: xi dimension mismatch");
  }
  const Eigen::Index m = points_.rows();
  const Eigen::Index d = tau_values_.rows();
  double best = std::numeric_limits<double>::infinity();
  int arg = 0;
  for (Eigen::Index j = 0; j < points_.cols(); ++j) {
    const double* p = points_.col(j).data();
    double a = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) a += (zw[i] - p[i]) * (zw[i] - p[i]);
    a = std::sqrt(a);
    if (a >= best) continue;
    double b = 0.0;
    if (tau_) {
      const double* tp = tau_values_.col(j).data();
      for (Eigen::Index i = 0; i < d; ++i) b += (xi[i] - tp[i]) * (xi[i] - tp[i]);
    }
    const double v = a + std::sqrt(b);
    if (v < best) {
      best = v;
      arg = static_cast<int>(j);
    }
  }
  return arg;
}

double GraphIndex::orbit_metric(std::span<const double> zw,
                                std::span<const double> xi, const Vec& p) const {
  if (!tau_) return metric(zw, xi, as_span(p), {});
  Vec t(tau_->order());
  tau_->evaluate(as_span(p), as_span(t));
  return metric(zw, xi, as_span(p), as_span(t));
}

double GraphIndex::distance(std::span<const double> zw, std::span<const double> xi,
                            bool refine) const {
  const int j = nearest(zw, xi);
  const Vec p = points_.col(j);
  const double plain =
      tau_ ? metric(zw, xi, as_span(p), as_span(Vec(tau_values_.col(j))))
           : metric(zw, xi, as_span(p), {});
  if (!refine || plain == 0.0) return plain;

  // Sample the orbit through p on [-dt, dt], then golden-section search
  // inside the best bracket.
  constexpr int kSub = 10;
  const double h = sample_dt_ / kSub;
  const int m = static_cast<int>(p.size());
  std::vector<Vec> orbit(2 * kSub + 1);
  orbit[kSub] = p;
  std::vector<double> work(4 * m);
  for (int dir : {1, -1}) {
    for (int k = 1; k <= kSub; ++k) {
      Vec next(m);
      rk4_step(zero_dynamics_.rhs, 0.0, as_span(orbit[kSub + dir * (k - 1)]), dir * h,
               as_span(next), work);
      orbit[kSub + dir * k] = std::move(next);
    }
  }
  int best_k = kSub;
  double best = plain;
  std::vector<double> values(orbit.size());
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    values[k] = orbit_metric(zw, xi, orbit[k]);
    if (values[k] < best) {
      best = values[k];
      best_k = static_cast<int>(k);
    }
  }
  // Offsets s are measured from the orbit sample best_k, in [-h, h] where
  // both neighbours exist.
  const double lo = best_k > 0 ? -h : 0.0;
  const double hi = best_k < 2 * kSub ? h : 0.0;
  auto eval = [&](double s) {
    if (s == 0.0) return values[best_k];
    Vec x(m);
    rk4_step(zero_dynamics_.rhs, 0.0, as_span(orbit[best_k]), s, as_span(x), work);
    return orbit_metric(zw, xi, x);
  };
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double e = a + kInvPhi * (b - a);
  double fc = eval(c);
  double fe = eval(e);
  for (int iter = 0; iter < 40 && b - a > 1e-12 * sample_dt_; ++iter) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + kInvPhi * (b - a);
      fe = eval(e);
    }
    best = std::min({best, fc, fe});
  }
  return std::min({best, fc, fe, plain});
}

double graph_distance(const TauChain& tau, const AttractorEstimate& a0,
                      const Vec& zw, const Vec& xi, bool refine) {
  return GraphIndex(a0, tau).distance(zw, xi, refine);
}

InvarianceProxy check_forward_invariance(const AttractorEstimate& a0,
                                         double duration, double tol, int count) {
  const GraphIndex index(a0);
  InvarianceProxy out;
  out.tol = tol;
  const int used = std::min(count, a0.size());
  std::vector<double> dist(static_cast<std::size_t>(used));
  parallel_for(used, [&](int k) {
    const int j = static_cast<int>((static_cast<long>(k) * a0.size()) / used);
    const Vec x = rk4_flow(a0.zero_dynamics().rhs, a0.point(j), duration,
                           a0.options().step);
    dist[k] = index.distance(as_span(x), {}, true);
  });
  for (double v : dist) out.max_distance = std::max(out.max_distance, v);
  out.checked = used;
  return out;
}

} // namespace nlreg
