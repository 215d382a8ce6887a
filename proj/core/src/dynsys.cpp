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
#include "nlreg/dynsys.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>

namespace nlreg {

StateLayout::StateLayout(std::vector<std::pair<std::string, int>> blocks) {
  for (auto& [name, size] : blocks) {
    if (size < 0) throw ConfigError("StateLayout: negative block size");
    blocks_.push_back(Block{name, dim_, size});
    dim_ += size;
  }
}

const Block& StateLayout::block(const std::string& name) const {
  auto it = std::find_if(blocks_.begin(), blocks_.end(),
                         [&](const Block& b) { return b.name == name; });
  if (it == blocks_.end()) {
    throw PreconditionError("StateLayout: no block named '" + name + "'");
  }
  return *it;
}

bool StateLayout::has(const std::string& name) const {
  return std::any_of(blocks_.begin(), blocks_.end(),
                     [&](const Block& b) { return b.name == name; });
}

Vec System::operator()(const Vec& x, double t) const {
  Vec dx(x.size());
  rhs(t, as_span(x), as_span(dx));
  return dx;
}

void ExosystemSpec::validate() const {
  if (r <= 0) throw ConfigError("ExosystemSpec: r must be positive");
  if (!s.valid() || s.in_dim() != r || s.out_dim() != r) {
    throw ConfigError("ExosystemSpec: s must map R^r to R^r");
  }
  if (w_box.dim() != r) throw ConfigError("ExosystemSpec: W box dimension != r");
}

void PlantSpec::validate() const {
  if (n < 0 || r <= 0) throw ConfigError("PlantSpec: invalid dimensions");
  if (n + r + 1 > kMaxStateDim / 2) {
    throw ConfigError("PlantSpec: state dimension too large");
  }
  if (n > 0 && (!f0.valid() || f0.in_dim() != n + r || f0.out_dim() != n)) {
    throw ConfigError("PlantSpec: f0 must map R^n x R^r to R^n");
  }
  if (n > 0 && (!f1.valid() || f1.in_dim() != n + 1 + r || f1.out_dim() != n)) {
    throw ConfigError("PlantSpec: f1 must map R^n x R x R^r to R^n");
  }
  if (!q.valid() || q.in_dim() != n + 1 + r || q.out_dim() != 1) {
    throw ConfigError("PlantSpec: q must map R^n x R x R^r to R");
  }
}

void PlantSpec::validate_against(const ExosystemSpec& exo) const {
  validate();
  exo.validate();
  if (exo.r != r) {
    throw ConfigError("PlantSpec: exosystem dimension does not match plant");
  }
}

void ScenarioSets::validate(int n, int d) const {
  if (z_box.dim() != n) throw ConfigError("ScenarioSets: Z box dimension != n");
  if (xi_box.dim() != d) throw ConfigError("ScenarioSets: Xi box dimension != d");
  if (!(e_interval.lower <= e_interval.upper)) {
    throw ConfigError("ScenarioSets: empty E interval");
  }
  if (runs <= 0) throw ConfigError("ScenarioSets: sample count must be positive");
}

System zero_dynamics_rhs(const PlantSpec& plant, const ExosystemSpec& exo) {
  plant.validate_against(exo);
  const int n = plant.n;
  const int r = plant.r;
  Rhs rhs = [f0 = plant.f0, s = exo.s, n, r](double, std::span<const double> x,
                                             std::span<double> dx) {
    if (n > 0) f0(x, dx.first(n));
    s(x.subspan(n, r), dx.subspan(n, r));
  };
  return System{std::move(rhs), StateLayout({{"z", n}, {"w", r}})};
}

SmoothMap zero_dynamics_field(const PlantSpec& plant, const ExosystemSpec& exo) {
  plant.validate_against(exo);
  const int n = plant.n;
  const int r = plant.r;
  const int order = std::min(n > 0 ? plant.f0.max_jet_order() : kMaxJetOrder,
                             exo.s.max_jet_order());
  return SmoothMap(
      n + r, n + r,
      [f0 = plant.f0, s = exo.s, n, r](std::span<const double> x,
                                       std::span<double> y) {
        if (n > 0) f0(x, y.first(n));
        s(x.subspan(n, r), y.subspan(n, r));
      },
      [f0 = plant.f0, s = exo.s, n, r](std::span<const Jet> x,
                                       std::span<Jet> y) {
        if (n > 0) f0(x, y.first(n));
        s(x.subspan(n, r), y.subspan(n, r));
      },
      order);
}

System augmented_openloop_rhs(const PlantSpec& plant, const ExosystemSpec& exo,
                              double u) {
  plant.validate_against(exo);
  const int n = plant.n;
  const int r = plant.r;
  Rhs rhs = [plant, s = exo.s, n, r, u](double, std::span<const double> x,
                                        std::span<double> dx) {
    // x = (z, zeta, w) is exactly the packed argument of f1 and q.
    const double zeta = x[n];
    double zw[kMaxStateDim];
    double f1v[kMaxStateDim];
    std::copy_n(x.begin(), n, zw);
    std::copy_n(x.begin() + n + 1, r, zw + n);
    if (n > 0) {
      plant.f0({zw, static_cast<std::size_t>(n + r)}, dx.first(n));
      plant.f1(x, {f1v, static_cast<std::size_t>(n)});
      for (int i = 0; i < n; ++i) dx[i] += f1v[i] * zeta;
    }
    dx[n] = plant.q.scalar(x) + u;
    s(x.subspan(n + 1, r), dx.subspan(n + 1, r));
  };
  return System{std::move(rhs), StateLayout({{"z", n}, {"zeta", 1}, {"w", r}})};
}

} // namespace nlreg
