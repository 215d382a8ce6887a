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
#include "nlreg/jet.hpp"

#include "nlreg/errors.hpp"

#include <cmath>

namespace nlreg {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double Jet::derivative(int k) const { return c_[k] * factorial(k); }

Jet& Jet::operator*=(const Jet& rhs) {
  // Both operands are copied so that x *= x works.
  const Jet a = *this;
  const Jet b = rhs;
  const int order = std::max(a.order_, b.order_);
  for (int k = 0; k <= order; ++k) {
    const int lo = std::max(0, k - b.order_);
    const int hi = std::min(k, a.order_);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += a.c_[j] * b.c_[k - j];
    c_[k] = s;
  }
  order_ = order;
  return *this;
}

Jet& Jet::operator/=(const Jet& rhs) {
  const Jet b = rhs;
  if (b.c_[0] == 0.0) {
    throw PreconditionError("Jet division by a series with zero constant term");
  }
  const int order = std::max(order_, b.order_);
  // q_k = (a_k - sum_{j=1..k} b_j q_{k-j}) / b_0, computed in place.
  for (int k = 0; k <= order; ++k) {
    double s = c_[k];
    for (int j = 1; j <= std::min(k, b.order_); ++j) s -= b.c_[j] * c_[k - j];
    c_[k] = s / b.c_[0];
  }
  order_ = order;
  return *this;
}

namespace {

// s = sin(u), c = cos(u):  k s_k = sum_{j=1..k} j u_j c_{k-j},
//                          k c_k = -sum_{j=1..k} j u_j s_{k-j}.
void sin_cos(const Jet& u, Jet& s, Jet& c) {
  const int order = u.order();
  s = Jet::constant(std::sin(u[0]), order);
  c = Jet::constant(std::cos(u[0]), order);
  for (int k = 1; k <= order; ++k) {
    double ss = 0.0;
    double cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += j * u[j] * c[k - j];
      cc -= j * u[j] * s[k - j];
    }
    s.coeff(k) = ss / k;
    c.coeff(k) = cc / k;
  }
}

} // namespace

Jet sin(const Jet& u) {
  Jet s, c;
  sin_cos(u, s, c);
  return s;
}

Jet cos(const Jet& u) {
  Jet s, c;
  sin_cos(u, s, c);
  return c;
}

Jet exp(const Jet& u) {
  const int order = u.order();
  Jet e = Jet::constant(std::exp(u[0]), order);
  // k e_k = sum_{j=1..k} j u_j e_{k-j}
  for (int k = 1; k <= order; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * u[j] * e[k - j];
    e.coeff(k) = s / k;
  }
  return e;
}

Jet pow(const Jet& u, int n) {
  if (n < 0) throw PreconditionError("Jet pow: negative exponent");
  Jet result = Jet::constant(1.0, u.order());
  Jet base = u;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

} // namespace nlreg
