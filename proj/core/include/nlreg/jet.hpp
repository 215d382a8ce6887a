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
#ifndef NLREG_JET_HPP
#define NLREG_JET_HPP

#include <algorithm>
#include <array>

namespace nlreg {

inline constexpr int kMaxJetOrder = 16;

/**
 * Truncated Taylor series of a scalar quantity along a trajectory.
 *
 * Coefficient k holds (1/k!) d^k/dt^k of the quantity. A jet of order p
 * carries coefficients 0..p; everything above is exactly zero, so plain
 * doubles promote to order-0 jets and mix freely with jets of any order.
 * Results of binary operations take the larger of the two orders.
 */
class Jet {
public:
  constexpr Jet() = default;
  constexpr Jet(double value) { c_[0] = value; } // NOLINT: implicit by design

  static Jet constant(double value, int order) {
    Jet j(value);
    j.order_ = order;
    return j;
  }

  int order() const { return order_; }
  double value() const { return c_[0]; }
  double operator[](int k) const { return c_[k]; }
  double& coeff(int k) { return c_[k]; }
  void set_order(int order) { order_ = order; }

  /// k-th time derivative, k! * coefficient k.
  double derivative(int k) const;

  Jet operator-() const {
    Jet r = *this;
    for (int k = 0; k <= order_; ++k) r.c_[k] = -r.c_[k];
    return r;
  }

  Jet& operator+=(const Jet& b) {
    order_ = std::max(order_, b.order_);
    for (int k = 0; k <= b.order_; ++k) c_[k] += b.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& b) {
    order_ = std::max(order_, b.order_);
    for (int k = 0; k <= b.order_; ++k) c_[k] -= b.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (int k = 0; k <= order_; ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator/=(double s) {
    for (int k = 0; k <= order_; ++k) c_[k] /= s;
    return *this;
  }
  Jet& operator*=(const Jet& b);
  Jet& operator/=(const Jet& b);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r = a;
    r *= b;
    return r;
  }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

  // Scalar overloads avoid the Cauchy product for the common case.
  friend Jet operator+(Jet a, double b) {
    a.c_[0] += b;
    return a;
  }
  friend Jet operator+(double a, Jet b) {
    b.c_[0] += a;
    return b;
  }
  friend Jet operator-(Jet a, double b) {
    a.c_[0] -= b;
    return a;
  }
  friend Jet operator-(double a, const Jet& b) {
    Jet r = -b;
    r.c_[0] += a;
    return r;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }

private:
  int order_ = 0;
  std::array<double, kMaxJetOrder + 1> c_{};
};

Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet exp(const Jet& u);
/// Integer power by repeated squaring; n >= 0.
Jet pow(const Jet& u, int n);

double factorial(int k);

} // namespace nlreg

#endif // NLREG_JET_HPP
