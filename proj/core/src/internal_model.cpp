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
#include "nlreg/internal_model.hpp"

#include "nlreg/attractor.hpp"
#include "nlreg/errors.hpp"
#include "nlreg/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlreg {

namespace {

// -q(z, 0, w) on the packed point (z, w).
SmoothMap make_steady_input(const PlantSpec& plant) {
  const int n = plant.n;
  const int r = plant.r;
  auto eval = [q = plant.q, n, r](std::span<const double> zw,
                                  std::span<double> out) {
    double arg[kMaxStateDim];
    std::copy_n(zw.begin(), n, arg);
    arg[n] = 0.0;
    std::copy_n(zw.begin() + n, r, arg + n + 1);
    out[0] = -q.scalar({arg, static_cast<std::size_t>(n + 1 + r)});
  };
  auto jet_eval = [q = plant.q, n, r](std::span<const Jet> zw,
                                      std::span<Jet> out) {
    Jet arg[kMaxStateDim];
    const int order = zw.empty() ? 0 : zw[0].order();
    std::copy_n(zw.begin(), n, arg);
    arg[n] = Jet::constant(0.0, order);
    std::copy_n(zw.begin() + n, r, arg + n + 1);
    Jet y;
    q({arg, static_cast<std::size_t>(n + 1 + r)}, {&y, 1});
    out[0] = -y;
  };
  return SmoothMap(n + r, 1, std::move(eval), std::move(jet_eval),
                   plant.q.max_jet_order());
}

} // namespace

TauChain::TauChain(const PlantSpec& plant, const ExosystemSpec& exo, int d)
    : d_(d), n_(plant.n), r_(plant.r), steady_input_(make_steady_input(plant)),
      field_(zero_dynamics_field(plant, exo)) {
  if (d < 1) throw ConfigError("TauChain: order d must be at least 1");
  if (d > kMaxJetOrder) throw ConfigError("TauChain: order d too large");
  if (steady_input_.max_jet_order() < d - 1) {
    throw CapabilityError("TauChain: q must be jet-evaluable to order " +
                          std::to_string(d - 1));
  }
  if (d > 1 && field_.max_jet_order() < d - 2) {
    throw CapabilityError("TauChain: zero dynamics must be jet-evaluable to order " +
                          std::to_string(d - 2));
  }
}

void TauChain::evaluate(std::span<const double> zw, std::span<double> tau) const {
  if (d_ > 1) {
    const std::vector<double> chain = lie_chain(steady_input_, field_, d_, zw);
    std::copy(chain.begin(), chain.end(), tau.begin());
  }
  // The first entry always comes from the plain double path.
  steady_input_(zw, tau.first(1));
}

Vec TauChain::operator()(const Vec& zw) const {
  Vec tau(d_);
  evaluate(as_span(zw), as_span(tau));
  return tau;
}

std::vector<double> TauChain::extended(std::span<const double> zw) const {
  std::vector<double> chain = lie_chain(steady_input_, field_, d_ + 1, zw);
  steady_input_(zw, std::span<double>(chain).first(1));
  return chain;
}

TauChain build_tau(const PlantSpec& plant, const ExosystemSpec& exo, int d) {
  plant.validate_against(exo);
  return TauChain(plant, exo, d);
}

namespace {

struct Probe {
  std::vector<Jet> x;
  Jet y;
};

// Value and gradient norm of a scalar map from one pass of first-order jets
// per coordinate.
void value_and_gradient(const SmoothMap& f, std::span<const double> p,
                        Probe& probe, double& value, double& grad_norm) {
  const int m = f.in_dim();
  for (int i = 0; i < m; ++i) probe.x[i] = Jet::constant(p[i], 1);
  double g2 = 0.0;
  value = 0.0;
  for (int j = 0; j < m; ++j) {
    probe.x[j].coeff(1) = 1.0;
    f(probe.x, {&probe.y, 1});
    probe.x[j].coeff(1) = 0.0;
    value = probe.y.value();
    g2 += probe.y[1] * probe.y[1];
  }
  if (m == 0) {
    f(probe.x, {&probe.y, 1});
    value = probe.y.value();
  }
  grad_norm = std::sqrt(g2);
}

struct GridMax {
  double bound = 0.0;
  double lipschitz = 0.0;
  Vec argmax_bound;
  Vec argmax_lipschitz;
};

void scan_grid(const SmoothMap& f, const Vec& lo, const Vec& hi, int per_axis,
               GridMax& best) {
  const int m = static_cast<int>(lo.size());
  Probe probe{std::vector<Jet>(m), Jet()};
  std::vector<int> idx(m, 0);
  Vec p(m);
  for (;;) {
    for (int i = 0; i < m; ++i) {
      p[i] = per_axis == 1 || hi[i] == lo[i]
                 ? lo[i]
                 : lo[i] + (hi[i] - lo[i]) * idx[i] / (per_axis - 1);
    }
    double value = 0.0;
    double grad = 0.0;
    value_and_gradient(f, as_span(p), probe, value, grad);
    if (!std::isfinite(value) || !std::isfinite(grad)) {
      throw ConfigError("saturate: driver is not finite on the saturation box");
    }
    if (std::abs(value) > best.bound || best.argmax_bound.size() == 0) {
      best.bound = std::max(best.bound, std::abs(value));
      best.argmax_bound = p;
    }
    if (grad > best.lipschitz || best.argmax_lipschitz.size() == 0) {
      best.lipschitz = std::max(best.lipschitz, grad);
      best.argmax_lipschitz = p;
    }
    int axis = 0;
    while (axis < m && ++idx[axis] == per_axis) idx[axis++] = 0;
    if (axis == m) break;
  }
}

} // namespace

DriverBounds grid_bounds(const SmoothMap& f, const Box& box,
                         const GridOptions& options) {
  if (f.out_dim() != 1 || f.in_dim() != box.dim()) {
    throw ConfigError("grid_bounds: driver dimension does not match the box");
  }
  if (f.max_jet_order() < 1) {
    throw CapabilityError("grid_bounds: driver needs first-order jets");
  }
  if (options.points_per_axis < 2 || options.refine_points < 2) {
    throw ConfigError("grid_bounds: grids need at least two points per axis");
  }
  const int d = box.dim();
  int per_axis = options.points_per_axis;
  if (d > 3) {
    const double total = std::pow(static_cast<double>(options.points_per_axis), 3);
    per_axis = std::max(2, static_cast<int>(std::floor(std::pow(total, 1.0 / d))));
  }
  GridMax best;
  scan_grid(f, box.lower(), box.upper(), per_axis, best);

  // Refine around each coarse maximizer on a one-cell neighbourhood.
  const Vec cell = (box.upper() - box.lower()) / (per_axis - 1);
  for (const Vec* center : {&best.argmax_bound, &best.argmax_lipschitz}) {
    const Vec c = *center;
    const Vec lo = (c - cell).cwiseMax(box.lower());
    const Vec hi = (c + cell).cwiseMin(box.upper());
    int refine = options.refine_points;
    if (d > 3) {
      const double total = std::pow(static_cast<double>(refine), 3);
      refine = std::max(2, static_cast<int>(std::floor(std::pow(total, 1.0 / d))));
    }
    scan_grid(f, lo, hi, refine, best);
  }
  return DriverBounds{best.bound, best.lipschitz};
}

SaturatedDriver::SaturatedDriver(SmoothMap f, Box s_box, DriverBounds bounds)
    : f_(std::move(f)), box_(std::move(s_box)), bounds_(bounds) {
  if (!f_.valid() || f_.out_dim() != 1 || f_.in_dim() != box_.dim()) {
    throw ConfigError("SaturatedDriver: driver must map R^d to R");
  }
}

double SaturatedDriver::operator()(std::span<const double> eta) const {
  double clamped[kMaxStateDim];
  const std::span<double> c(clamped, eta.size());
  box_.clamp(eta, c);
  return f_.scalar(c);
}

SaturatedDriver saturate(const SmoothMap& f, const Box& s_box,
                         const std::optional<Box>& image_box,
                         const GridOptions& options) {
  if (image_box) {
    if (image_box->dim() != s_box.dim()) {
      throw ConfigError("saturate: image box dimension does not match");
    }
    if (!s_box.contains_in_interior(*image_box)) {
      throw ConfigError(
          "saturate: saturation box must strictly contain the tau image box");
    }
  }
  return SaturatedDriver(f, s_box, grid_bounds(f, s_box, options));
}

InternalModel::InternalModel(SaturatedDriver driver) : driver_(std::move(driver)) {}

void InternalModel::phi_c(std::span<const double> eta,
                          std::span<double> out) const {
  const int d = order();
  for (int i = 0; i + 1 < d; ++i) out[i] = eta[i + 1];
  out[d - 1] = -driver_(eta);
}

Vec InternalModel::phi_c(const Vec& eta) const {
  Vec out(eta.size());
  phi_c(as_span(eta), as_span(out));
  return out;
}

Vec phi_c(const InternalModel& im, const Vec& eta) { return im.phi_c(eta); }

InternalModelResidual verify_internal_model(const InternalModel& im,
                                            const TauChain& tau,
                                            const AttractorEstimate& a0,
                                            const PlantSpec& plant,
                                            const InternalModelCheckOptions& options) {
  if (a0.size() == 0) {
    throw PreconditionError("verify_internal_model: empty attractor estimate");
  }
  if (im.order() != tau.order()) {
    throw ConfigError("verify_internal_model: internal model and tau orders differ");
  }
  if (options.fd_step <= 0.0 || options.sample_dt <= 0.0 || options.horizon < 0.0) {
    throw ConfigError("verify_internal_model: invalid step options");
  }
  const int d = tau.order();
  const int n = plant.n;
  const int r = plant.r;
  InternalModelResidual res;
  res.tol = options.tol;

  // (b) on every cloud point.
  Vec t(d);
  double arg[kMaxStateDim];
  for (int j = 0; j < a0.size(); ++j) {
    const Vec p = a0.point(j);
    tau.evaluate(as_span(p), as_span(t));
    std::copy_n(p.data(), n, arg);
    arg[n] = 0.0;
    std::copy_n(p.data() + n, r, arg + n + 1);
    const double q = plant.q.scalar({arg, static_cast<std::size_t>(n + 1 + r)});
    res.output = std::max(res.output, std::abs(t[0] + q));
  }

  // (a) along zero-dynamics trajectories from evenly spread cloud points.
  const Rhs& rhs = a0.zero_dynamics().rhs;
  const int count = std::min(options.trajectories, a0.size());
  const int samples =
      static_cast<int>(std::floor(options.horizon / options.sample_dt + 1e-9)) + 1;
  const double h = options.fd_step;
  Vec tp(d);
  Vec tm(d);
  for (int k = 0; k < count; ++k) {
    const int index = static_cast<int>((static_cast<long>(k) * a0.size()) / count);
    Vec x = a0.point(index);
    for (int s = 0; s < samples; ++s) {
      const Vec xp = rk4_flow(rhs, x, h, h);
      const Vec xm = rk4_flow(rhs, x, -h, h);
      tau.evaluate(as_span(x), as_span(t));
      tau.evaluate(as_span(xp), as_span(tp));
      tau.evaluate(as_span(xm), as_span(tm));
      const Vec fd = (tp - tm) / (2.0 * h);
      res.chain = std::max(res.chain, (fd - im.phi_c(t)).norm());
      ++res.samples;
      if (s + 1 < samples) x = rk4_flow(rhs, x, options.sample_dt);
    }
  }
  return res;
}

} // namespace nlreg
