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
#ifndef NLREG_INTEGRATE_HPP
#define NLREG_INTEGRATE_HPP

#include "nlreg/dynsys.hpp"
#include "nlreg/types.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nlreg {

enum class Method {
  kRk4,            ///< classical fixed-step fourth order
  kDormandPrince45 ///< embedded 5(4) pair with PI step control
};

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct IntegratorOptions {
  Method method = Method::kRk4;
  double step = 1e-3;          ///< fixed step (RK4)
  double rtol = 1e-9;          ///< adaptive tolerances
  double atol = 1e-12;
  double max_step = 0.1;       ///< adaptive step ceiling
  double output_dt = 0.01;     ///< uniform output grid spacing
  double overflow_guard = 1e9; ///< abort when max|x_i| exceeds this
  long max_steps = 200'000'000;

  static IntegratorOptions adaptive(double rtol = 1e-9, double atol = 1e-12) {
    IntegratorOptions o;
    o.method = Method::kDormandPrince45;
    o.rtol = rtol;
    o.atol = atol;
    return o;
  }
};

struct IntegratorStats {
  Method method = Method::kRk4;
  long steps = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double step = 0.0;
  double rtol = 0.0;
  double atol = 0.0;
};

/// States on a strictly increasing output grid, one column per sample.
struct Trajectory {
  std::vector<double> t;
  Mat x;
  StateLayout layout;
  IntegratorStats stats;

  int size() const { return static_cast<int>(t.size()); }
  Vec state(int i) const { return x.col(i); }
  Vec final_state() const { return x.col(size() - 1); }
  /// Component `index` of the named block at sample i.
  double at(const std::string& block, int index, int i) const {
    return x(layout.block(block).offset + index, i);
  }
  Vec block(const std::string& name, int i) const {
    const Block& b = layout.block(name);
    return x.col(i).segment(b.offset, b.size);
  }
};

/// Step-size underflow or divergence. Holds everything computed so far.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

private:
  Trajectory partial_;
};

/// Uniform output grid t0, t0 + dt, ..., closing exactly at t1.
std::vector<double> output_grid(double t0, double t1, double dt);

/**
 * Integrates x' = rhs(t, x) over [t0, t1] and samples the solution on the
 * uniform output grid by cubic Hermite interpolation between steps. The
 * fixed-step path is deterministic: step boundaries are t0 + i h, never
 * accumulated sums.
 */
Trajectory integrate(const System& system, const Vec& x0, double t0, double t1,
                     const IntegratorOptions& options);

/// One classical RK4 step; `work` must hold 4 * dim doubles.
void rk4_step(const Rhs& rhs, double t, std::span<const double> x, double h,
              std::span<double> out, std::span<double> work);

/// Flow over `duration` (either sign) by RK4 with |h| <= max_step.
Vec rk4_flow(const Rhs& rhs, const Vec& x0, double duration,
             double max_step = 1e-3, double t0 = 0.0);

} // namespace nlreg

#endif // NLREG_INTEGRATE_HPP
