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
#ifndef NLREG_TEST_SUPPORT_HPP
#define NLREG_TEST_SUPPORT_HPP

#include "nlreg/dynsys.hpp"
#include "nlreg/integrate.hpp"
#include "nlreg/types.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace nlreg::testing {

/**
 * Time derivatives 0..max_order of g(x(t)) at t = 0, where x is the flow of
 * `rhs` through x0. The flow is sampled on Chebyshev nodes in [-h, h] with a
 * fine RK4 scheme and a degree-`degree` polynomial is fitted by least
 * squares; derivative k is k! times coefficient k.
 */
inline std::vector<double> derivatives_along_flow(const Rhs& rhs,
                                                  const std::function<double(const Vec&)>& g,
                                                  const Vec& x0, int max_order,
                                                  double h = 0.1, int nodes = 25,
                                                  int degree = 12) {
  Mat v(nodes, degree + 1);
  Vec y(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double s = std::cos(std::numbers::pi * (i + 0.5) / nodes);
    const Vec x = rk4_flow(rhs, x0, s * h, 1e-4);
    y[i] = g(x);
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      v(i, k) = p;
      p *= s;
    }
  }
  const Vec coef = v.colPivHouseholderQr().solve(y);
  std::vector<double> out;
  double fact = 1.0;
  for (int k = 0; k <= max_order; ++k) {
    if (k > 0) fact *= k;
    out.push_back(coef[k] * fact / std::pow(h, k));
  }
  return out;
}

/// Hand-written oscillator plant z' = -z + w1 + 0.1 zeta, zeta' = w1 + zeta z + u.
struct OscillatorOracle {
  double mu = 0.0;       ///< 0: harmonic exosystem
  bool harmonic = true;

  Vec exo(const Vec& w) const {
    Vec dw(2);
    dw[0] = w[1];
    dw[1] = harmonic ? -w[0] : mu * (1.0 - w[0] * w[0]) * w[1] - w[0];
    return dw;
  }
  double driver(double a, double b) const {
    return harmonic ? a : -mu * (1.0 - a * a) * b + a;
  }
  double zdot(double z, double zeta, const Vec& w) const { return -z + w[0] + 0.1 * zeta; }
  double q(double z, double zeta, const Vec& w) const { return w[0] + zeta * z; }
};

} // namespace nlreg::testing

#endif // NLREG_TEST_SUPPORT_HPP
