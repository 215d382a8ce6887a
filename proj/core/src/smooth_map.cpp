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
#include "nlreg/smooth_map.hpp"

#include "nlreg/errors.hpp"

#include <string>

namespace nlreg {

SmoothMap::SmoothMap(int in_dim, int out_dim, DoubleFn eval, JetFn jet_eval,
                     int max_jet_order)
    : in_dim_(in_dim), out_dim_(out_dim),
      max_jet_order_(std::min(max_jet_order, kMaxJetOrder)),
      eval_(std::move(eval)), jet_eval_(std::move(jet_eval)) {
  if (in_dim_ < 0 || out_dim_ <= 0) {
    throw ConfigError("SmoothMap: invalid dimensions");
  }
}

SmoothMap SmoothMap::values_only(int in_dim, int out_dim, DoubleFn eval) {
  const int out = out_dim;
  JetFn jet = [eval, out](std::span<const Jet> x, std::span<Jet> y) {
    double xv[kMaxStateDim];
    double yv[kMaxStateDim];
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].order() > 0) {
        throw CapabilityError("SmoothMap: map has no jet implementation");
      }
      xv[i] = x[i].value();
    }
    eval({xv, x.size()}, {yv, static_cast<std::size_t>(out)});
    for (int i = 0; i < out; ++i) y[i] = Jet(yv[i]);
  };
  return SmoothMap(in_dim, out_dim, std::move(eval), std::move(jet), 0);
}

Vec SmoothMap::operator()(const Vec& x) const {
  Vec y(out_dim_);
  eval_(as_span(x), as_span(y));
  return y;
}

double SmoothMap::scalar(std::span<const double> x) const {
  double y = 0.0;
  eval_(x, {&y, 1});
  return y;
}

Mat SmoothMap::jacobian(std::span<const double> x) const {
  if (max_jet_order_ < 1) {
    throw CapabilityError("SmoothMap::jacobian needs first-order jets");
  }
  Mat jac(out_dim_, in_dim_);
  std::vector<Jet> xj(in_dim_);
  std::vector<Jet> yj(out_dim_);
  for (int i = 0; i < in_dim_; ++i) xj[i] = Jet::constant(x[i], 1);
  for (int col = 0; col < in_dim_; ++col) {
    xj[col].coeff(1) = 1.0;
    jet_eval_(xj, yj);
    for (int row = 0; row < out_dim_; ++row) jac(row, col) = yj[row][1];
    xj[col].coeff(1) = 0.0;
  }
  return jac;
}

std::vector<Jet> flow_jets(const SmoothMap& field, int order,
                           std::span<const double> x0) {
  const int m = field.in_dim();
  if (field.out_dim() != m) {
    throw ConfigError("flow_jets: field is not a vector field");
  }
  if (static_cast<int>(x0.size()) != m) {
    throw ConfigError("flow_jets: point dimension mismatch");
  }
  if (order > kMaxJetOrder) {
    throw CapabilityError("flow_jets: order " + std::to_string(order) +
                          " exceeds the jet capacity");
  }
  if (order > 0 && field.max_jet_order() < order - 1) {
    throw CapabilityError("flow_jets: vector field supports jets up to order " +
                          std::to_string(field.max_jet_order()));
  }
  std::vector<Jet> x(m);
  std::vector<Jet> fx(m);
  for (int i = 0; i < m; ++i) x[i] = Jet::constant(x0[i], order);
  // Coefficient k of F(x) only depends on coefficients 0..k of x.
  for (int k = 0; k < order; ++k) {
    field(x, fx);
    for (int i = 0; i < m; ++i) x[i].coeff(k + 1) = fx[i][k] / (k + 1);
  }
  return x;
}

std::vector<double> lie_chain(const SmoothMap& g, const SmoothMap& field,
                              int count, std::span<const double> x0) {
  if (count < 1) throw ConfigError("lie_chain: count must be positive");
  if (g.out_dim() != 1 || g.in_dim() != field.in_dim()) {
    throw ConfigError("lie_chain: scalar field dimension mismatch");
  }
  const int order = count - 1;
  if (g.max_jet_order() < order) {
    throw CapabilityError("lie_chain: scalar field supports jets up to order " +
                          std::to_string(g.max_jet_order()));
  }
  const std::vector<Jet> x = flow_jets(field, order, x0);
  Jet gx;
  g(x, {&gx, 1});
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = gx.derivative(k);
  return out;
}

} // namespace nlreg
