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
#ifndef NLREG_TYPES_HPP
#define NLREG_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>

namespace nlreg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Upper bound on any assembled state dimension. Right-hand sides use stack
/// buffers of this size so that evaluation never allocates.
inline constexpr int kMaxStateDim = 64;

inline std::span<const double> as_span(const Vec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline std::span<double> as_span(Vec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Axis-aligned compact box. Construction validates finiteness and ordering.
class Box {
public:
  Box() = default;
  Box(Vec lower, Vec upper);

  static Box point(const Vec& p) { return Box(p, p); }
  static Box cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  Vec center() const { return 0.5 * (lower_ + upper_); }
  Vec half_widths() const { return 0.5 * (upper_ - lower_); }

  bool contains(std::span<const double> x) const;
  bool contains(const Vec& x) const { return contains(as_span(x)); }
  /// True iff `inner` lies strictly inside this box on every axis.
  bool contains_in_interior(const Box& inner) const;

  /// Componentwise projection onto the box.
  void clamp(std::span<const double> x, std::span<double> out) const;
  Vec clamp(const Vec& x) const;

  /// Grows every half-width h to max(h * (1 + fraction), abs_floor), keeping
  /// the center fixed.
  Box inflated(double fraction, double abs_floor = 0.0) const;
  /// Uniform scaling of every half-width about the center.
  Box scaled(double factor) const;

  /// Smallest box containing both.
  Box hull(const Box& other) const;

  friend bool operator==(const Box& a, const Box& b) {
    return a.lower_ == b.lower_ && a.upper_ == b.upper_;
  }

private:
  Vec lower_;
  Vec upper_;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// Seeded generator with a platform-independent mapping to [0, 1).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// 53 random mantissa bits; identical on every standard library.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  Vec sample(const Box& box);
  double sample(const Interval& interval) {
    return uniform(interval.lower, interval.upper);
  }
  /// Uniform direction on the unit sphere of the given dimension.
  Vec unit_vector(int dim);

private:
  std::mt19937_64 engine_;
};

} // namespace nlreg

#endif // NLREG_TYPES_HPP
