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
#ifndef NLREG_SMOOTH_MAP_HPP
#define NLREG_SMOOTH_MAP_HPP

#include "nlreg/jet.hpp"
#include "nlreg/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace nlreg {

/**
 * A map R^in -> R^out that can be evaluated on plain doubles and on Taylor
 * jets.
 *
 * The usual way to build one is from a generic lambda, which is then
 * instantiated for both scalar types:
 *
 *   auto s = SmoothMap::generic(2, 2, [](auto w, auto out) {
 *     out[0] = w[1];
 *     out[1] = -w[0];
 *   });
 *
 * The lambda receives std::span<const T> and std::span<T>. Elementary
 * functions should be called unqualified after `using std::sin;` so that
 * argument-dependent lookup picks the jet overloads.
 */
class SmoothMap {
public:
  using DoubleFn = std::function<void(std::span<const double>, std::span<double>)>;
  using JetFn = std::function<void(std::span<const Jet>, std::span<Jet>)>;

  SmoothMap() = default;
  SmoothMap(int in_dim, int out_dim, DoubleFn eval, JetFn jet_eval,
            int max_jet_order = kMaxJetOrder);

  template <class F>
  static SmoothMap generic(int in_dim, int out_dim, F f,
                           int max_jet_order = kMaxJetOrder) {
    return SmoothMap(
        in_dim, out_dim,
        [f](std::span<const double> x, std::span<double> y) { f(x, y); },
        [f](std::span<const Jet> x, std::span<Jet> y) { f(x, y); },
        max_jet_order);
  }

  /// A map without a jet implementation; only order-0 jets are accepted.
  static SmoothMap values_only(int in_dim, int out_dim, DoubleFn eval);

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  int max_jet_order() const { return max_jet_order_; }
  bool valid() const { return static_cast<bool>(eval_); }

  void operator()(std::span<const double> x, std::span<double> y) const {
    eval_(x, y);
  }
  void operator()(std::span<const Jet> x, std::span<Jet> y) const {
    jet_eval_(x, y);
  }
  Vec operator()(const Vec& x) const;
  /// Convenience for scalar-valued maps.
  double scalar(std::span<const double> x) const;

  /// Jacobian-vector rows via first-order jets: row i of d(out)/d(in).
  Mat jacobian(std::span<const double> x) const;

private:
  int in_dim_ = 0;
  int out_dim_ = 0;
  int max_jet_order_ = 0;
  DoubleFn eval_;
  JetFn jet_eval_;
};

/**
 * Repeated Lie derivatives of a scalar field along a vector field.
 *
 * Returns (g, L_F g, ..., L_F^{count-1} g) at x0, obtained by propagating
 * the time-Taylor series of the flow of F through x0 (Taylor-method
 * recursion x_{k+1} = [F(x)]_k / (k+1)) and reading off the coefficients
 * of g along it. Throws CapabilityError when either map cannot carry the
 * required jet order.
 */
std::vector<double> lie_chain(const SmoothMap& g, const SmoothMap& field,
                              int count, std::span<const double> x0);

/// Time-Taylor coefficients of the flow of `field` through x0, orders 0..order.
std::vector<Jet> flow_jets(const SmoothMap& field, int order,
                           std::span<const double> x0);

} // namespace nlreg

#endif // NLREG_SMOOTH_MAP_HPP
