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
#include "nlreg/types.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlreg {

Box::Box(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw ConfigError("Box: lower and upper bounds differ in dimension");
  }
  if (lower_.size() == 0) {
    throw ConfigError("Box: zero-dimensional box");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw ConfigError("Box: non-finite bound");
    }
    if (lower_[i] > upper_[i]) {
      throw ConfigError("Box: lower bound exceeds upper bound");
    }
  }
}

Box Box::cube(int dim, double lo, double hi) {
  return Box(Vec::Constant(dim, lo), Vec::Constant(dim, hi));
}

bool Box::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  }
  return true;
}

bool Box::contains_in_interior(const Box& inner) const {
  if (inner.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!(lower_[i] < inner.lower_[i] && inner.upper_[i] < upper_[i])) {
      return false;
    }
  }
  return true;
}

void Box::clamp(std::span<const double> x, std::span<double> out) const {
  for (int i = 0; i < dim(); ++i) {
    out[i] = std::clamp(x[i], lower_[i], upper_[i]);
  }
}

Vec Box::clamp(const Vec& x) const {
  Vec out(x.size());
  clamp(as_span(x), as_span(out));
  return out;
}

Box Box::inflated(double fraction, double abs_floor) const {
  const Vec c = center();
  Vec h = half_widths();
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    h[i] = std::max(h[i] * (1.0 + fraction), abs_floor);
  }
  return Box(c - h, c + h);
}

Box Box::scaled(double factor) const {
  const Vec c = center();
  const Vec h = factor * half_widths();
  return Box(c - h, c + h);
}

Box Box::hull(const Box& other) const {
  return Box(lower_.cwiseMin(other.lower_), upper_.cwiseMax(other.upper_));
}

Vec Rng::sample(const Box& box) {
  Vec x(box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    x[i] = uniform(box.lower()[i], box.upper()[i]);
  }
  return x;
}

Vec Rng::unit_vector(int dim) {
  // Box-Muller from our own uniforms keeps the stream portable.
  Vec v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) {
      const double u1 = 1.0 - uniform();
      const double u2 = uniform();
      v[i] = std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * std::numbers::pi * u2);
    }
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

} // namespace nlreg
