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
#include "nlreg/closed_loop.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlreg {

void ControllerConfig::validate(bool allow_zero_k) const {
  if (gains.d != im.order() || gains.g.size() != im.order()) {
    throw ConfigError("ControllerConfig: gain and internal-model orders differ");
  }
  if (!std::isfinite(k) || k < 0.0 || (!allow_zero_k && k == 0.0)) {
    throw ConfigError("ControllerConfig: k must be positive");
  }
}

RegulatorOutput regulator_output(const ControllerConfig& cc,
                                 std::span<const double> xi, double y) {
  RegulatorOutput out;
  out.v = -cc.k * y;
  out.u = InternalModel::gamma(xi) + out.v;
  return out;
}

namespace {

struct Dims {
  int n;
  int r;
  int d;
};

Dims check(const PlantSpec& plant, const ExosystemSpec& exo, int d) {
  plant.validate_against(exo);
  if (plant.n + plant.r + d + 1 > kMaxStateDim) {
    throw ConfigError("closed loop: state dimension too large");
  }
  return Dims{plant.n, plant.r, d};
}

} // namespace

System closed_loop_rhs_xi(const PlantSpec& plant, const ExosystemSpec& exo,
                          const ControllerConfig& cc) {
  cc.validate(true);
  const Dims dm = check(plant, exo, cc.order());
  Rhs rhs = [plant, s = exo.s, im = cc.im, g = cc.gains.g, k = cc.k,
             dm](double, std::span<const double> x, std::span<double> dx) {
    const int n = dm.n, r = dm.r, d = dm.d;
    const double zeta = x[n];
    const auto xi = x.subspan(n + 1, d);
    const auto w = x.subspan(n + 1 + d, r);
    double zw[kMaxStateDim];
    double zzw[kMaxStateDim];
    double f1v[kMaxStateDim];
    std::copy_n(x.begin(), n, zw);
    std::copy(w.begin(), w.end(), zw + n);
    std::copy_n(x.begin(), n + 1, zzw);
    std::copy(w.begin(), w.end(), zzw + n + 1);
    const std::span<const double> zw_s(zw, static_cast<std::size_t>(n + r));
    const std::span<const double> zzw_s(zzw, static_cast<std::size_t>(n + 1 + r));

    const double v = -k * zeta;
    if (n > 0) {
      plant.f0(zw_s, dx.first(n));
      plant.f1(zzw_s, {f1v, static_cast<std::size_t>(n)});
      for (int i = 0; i < n; ++i) dx[i] += f1v[i] * zeta;
    }
    dx[n] = plant.q.scalar(zzw_s) + xi[0] + v;
    const auto dxi = dx.subspan(n + 1, d);
    im.phi_c(xi, dxi);
    for (int i = 0; i < d; ++i) dxi[i] += g[i] * v;
    s(w, dx.subspan(n + 1 + d, r));
  };
  return System{std::move(rhs), StateLayout({{"z", dm.n},
                                             {"zeta", 1},
                                             {"xi", dm.d},
                                             {"w", dm.r}})};
}

System closed_loop_rhs_eta(const PlantSpec& plant, const ExosystemSpec& exo,
                           const ControllerConfig& cc) {
  cc.validate(true);
  const Dims dm = check(plant, exo, cc.order());
  Rhs rhs = [plant, s = exo.s, im = cc.im, g = cc.gains.g, kbar = cc.kbar(),
             dm](double, std::span<const double> x, std::span<double> dx) {
    const int n = dm.n, r = dm.r, d = dm.d;
    const auto w = x.subspan(n, r);
    const auto eta = x.subspan(n + r, d);
    const double e = x[n + r + d];
    double zzw[kMaxStateDim];
    double f1v[kMaxStateDim];
    double xi[kMaxStateDim];
    double phi[kMaxStateDim];
    std::copy_n(x.begin(), n, zzw);
    zzw[n] = e;
    std::copy(w.begin(), w.end(), zzw + n + 1);
    const std::span<const double> zzw_s(zzw, static_cast<std::size_t>(n + 1 + r));

    if (n > 0) {
      plant.f0(x.first(n + r), dx.first(n));
      plant.f1(zzw_s, {f1v, static_cast<std::size_t>(n)});
      for (int i = 0; i < n; ++i) dx[i] += f1v[i] * e;
    }
    s(w, dx.subspan(n, r));

    const double q = plant.q.scalar(zzw_s);
    for (int i = 0; i < d; ++i) xi[i] = eta[i] + g[i] * e;
    const std::span<const double> xi_s(xi, static_cast<std::size_t>(d));
    im.phi_c(xi_s, {phi, static_cast<std::size_t>(d)});
    const double gamma_xi = xi[0];
    const auto deta = dx.subspan(n + r, d);
    for (int i = 0; i < d; ++i) deta[i] = phi[i] - g[i] * gamma_xi - g[i] * q;
    dx[n + r + d] = q + eta[0] - kbar * e;
  };
  return System{std::move(rhs), StateLayout({{"z", dm.n},
                                             {"w", dm.r},
                                             {"eta", dm.d},
                                             {"e", 1}})};
}

System zero_dynamics_with_observer_rhs(const PlantSpec& plant,
                                       const ExosystemSpec& exo,
                                       const InternalModel& im,
                                       const GainDesign& gains) {
  if (gains.g.size() != im.order()) {
    throw ConfigError("observer: gain and internal-model orders differ");
  }
  const Dims dm = check(plant, exo, im.order());
  Rhs rhs = [plant, s = exo.s, im, g = gains.g, dm](double, std::span<const double> x,
                                                    std::span<double> dx) {
    const int n = dm.n, r = dm.r, d = dm.d;
    const auto w = x.subspan(n, r);
    const auto xi = x.subspan(n + r, d);
    double z0w[kMaxStateDim];
    std::copy_n(x.begin(), n, z0w);
    z0w[n] = 0.0;
    std::copy(w.begin(), w.end(), z0w + n + 1);
    if (n > 0) plant.f0(x.first(n + r), dx.first(n));
    s(w, dx.subspan(n, r));
    const double innovation =
        -plant.q.scalar({z0w, static_cast<std::size_t>(n + 1 + r)}) - xi[0];
    const auto dxi = dx.subspan(n + r, d);
    im.phi_c(xi, dxi);
    for (int i = 0; i < d; ++i) dxi[i] += g[i] * innovation;
  };
  return System{std::move(rhs),
                StateLayout({{"z", dm.n}, {"w", dm.r}, {"xi", dm.d}})};
}

Vec xi_state_to_eta(const Vec& x, int n, int r, const Vec& g) {
  const int d = static_cast<int>(g.size());
  Vec out(n + r + d + 1);
  const double zeta = x[n];
  out.head(n) = x.head(n);
  out.segment(n, r) = x.segment(n + 1 + d, r);
  out.segment(n + r, d) = x.segment(n + 1, d) - g * zeta;
  out[n + r + d] = zeta;
  return out;
}

Vec eta_state_to_xi(const Vec& x, int n, int r, const Vec& g) {
  const int d = static_cast<int>(g.size());
  Vec out(n + 1 + d + r);
  const double e = x[n + r + d];
  out.head(n) = x.head(n);
  out[n] = e;
  out.segment(n + 1, d) = x.segment(n + r, d) + g * e;
  out.segment(n + 1 + d, r) = x.segment(n, r);
  return out;
}

} // namespace nlreg
