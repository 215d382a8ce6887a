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
#include "nlreg/integrate.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlreg {

std::string_view to_string(Method method) {
  switch (method) {
  case Method::kRk4:
    return "rk4";
  case Method::kDormandPrince45:
    return "dp45";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "rk4") return Method::kRk4;
  if (name == "dp45") return Method::kDormandPrince45;
  throw ConfigError("unknown integrator '" + std::string(name) + "'");
}

std::vector<double> output_grid(double t0, double t1, double dt) {
  if (!(t1 > t0)) throw PreconditionError("output_grid: empty time span");
  if (!(dt > 0.0)) throw ConfigError("output_grid: output_dt must be positive");
  const double span = t1 - t0;
  const long n = static_cast<long>(std::floor(span / dt + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 2);
  for (long i = 0; i <= n; ++i) grid.push_back(t0 + static_cast<double>(i) * dt);
  if (t1 - grid.back() > 1e-9 * dt) {
    grid.push_back(t1);
  } else {
    grid.back() = t1;
  }
  return grid;
}

void rk4_step(const Rhs& rhs, double t, std::span<const double> x, double h,
              std::span<double> out, std::span<double> work) {
  const std::size_t m = x.size();
  auto k1 = work.subspan(0, m);
  auto k2 = work.subspan(m, m);
  auto k3 = work.subspan(2 * m, m);
  auto k4 = work.subspan(3 * m, m);
  double tmp[kMaxStateDim];
  std::span<double> y(tmp, m);
  rhs(t, x, k1);
  for (std::size_t i = 0; i < m; ++i) y[i] = x[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, y, k2);
  for (std::size_t i = 0; i < m; ++i) y[i] = x[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, y, k3);
  for (std::size_t i = 0; i < m; ++i) y[i] = x[i] + h * k3[i];
  rhs(t + h, y, k4);
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

Vec rk4_flow(const Rhs& rhs, const Vec& x0, double duration, double max_step,
             double t0) {
  if (duration == 0.0) return x0;
  const long n = std::max(1L, static_cast<long>(std::ceil(
                                  std::abs(duration) / max_step - 1e-9)));
  const double h = duration / static_cast<double>(n);
  Vec x = x0;
  Vec next(x0.size());
  std::vector<double> work(4 * x0.size());
  for (long i = 0; i < n; ++i) {
    rk4_step(rhs, t0 + static_cast<double>(i) * h, as_span(x), h, as_span(next),
             work);
    x.swap(next);
  }
  return x;
}

namespace {

bool diverged(std::span<const double> x, double guard) {
  for (double v : x) {
    if (!std::isfinite(v) || std::abs(v) > guard) return true;
  }
  return false;
}

// Collects interpolated samples as steps complete.
class Sampler {
public:
  Sampler(const std::vector<double>& grid, int dim, double t_tol)
      : grid_(grid), x_(dim, static_cast<Eigen::Index>(grid.size())),
        t_tol_(t_tol) {}

  void start(std::span<const double> x0) {
    for (std::size_t i = 0; i < x0.size(); ++i) x_(i, 0) = x0[i];
    next_ = 1;
  }

  // Cubic Hermite on [ta, tb] from end states and slopes.
  void step(double ta, double tb, std::span<const double> xa,
            std::span<const double> fa, std::span<const double> xb,
            std::span<const double> fb) {
    const double h = tb - ta;
    while (next_ < grid_.size() && grid_[next_] <= tb + t_tol_) {
      const double tq = grid_[next_];
      auto col = x_.col(static_cast<Eigen::Index>(next_));
      if (std::abs(tq - tb) <= t_tol_) {
        for (std::size_t i = 0; i < xb.size(); ++i) col[i] = xb[i];
      } else {
        const double th = (tq - ta) / h;
        const double th2 = th * th;
        const double th3 = th2 * th;
        const double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
        const double h10 = th3 - 2.0 * th2 + th;
        const double h01 = -2.0 * th3 + 3.0 * th2;
        const double h11 = th3 - th2;
        for (std::size_t i = 0; i < xb.size(); ++i) {
          col[i] = h00 * xa[i] + h10 * h * fa[i] + h01 * xb[i] + h11 * h * fb[i];
        }
      }
      ++next_;
    }
  }

  bool done() const { return next_ >= grid_.size(); }

  Trajectory finish(const StateLayout& layout, const IntegratorStats& stats,
                    bool truncate) const {
    Trajectory traj;
    const std::size_t count = truncate ? next_ : grid_.size();
    traj.t.assign(grid_.begin(), grid_.begin() + static_cast<long>(count));
    traj.x = x_.leftCols(static_cast<Eigen::Index>(count));
    traj.layout = layout;
    traj.stats = stats;
    return traj;
  }

private:
  const std::vector<double>& grid_;
  Mat x_;
  double t_tol_;
  std::size_t next_ = 0;
};

StateLayout layout_or_default(const System& system, int dim) {
  if (system.layout.dim() == dim) return system.layout;
  return StateLayout({{"x", dim}});
}

std::string divergence_message(double t) {
  std::ostringstream os;
  os << "integration diverged at t = " << t
     << " (state left the overflow guard or became non-finite)";
  return os.str();
}

Trajectory integrate_rk4(const System& system, const Vec& x0, double t0,
                         double t1, const IntegratorOptions& o) {
  const int m = static_cast<int>(x0.size());
  const StateLayout layout = layout_or_default(system, m);
  const std::vector<double> grid = output_grid(t0, t1, o.output_dt);
  if (!(o.step > 0.0)) throw ConfigError("integrate: step must be positive");
  const long steps = std::max(
      1L, static_cast<long>(std::ceil((t1 - t0) / o.step - 1e-9)));

  IntegratorStats stats;
  stats.method = Method::kRk4;
  stats.step = o.step;

  Sampler sampler(grid, m, 1e-9 * o.step);
  sampler.start(as_span(x0));

  Vec xa = x0;
  Vec xb(m);
  Vec fa(m);
  Vec fb(m);
  std::vector<double> work(4 * m);
  std::vector<double> y(m);
  system.rhs(t0, as_span(xa), as_span(fa));
  stats.rhs_evals = 1;
  for (long i = 0; i < steps; ++i) {
    const double ta = t0 + static_cast<double>(i) * o.step;
    const double tb = (i + 1 == steps) ? t1 : t0 + static_cast<double>(i + 1) * o.step;
    const double h = tb - ta;
    // Stage 1 reuses f(ta, xa) from the previous step.
    auto k1 = as_span(fa);
    auto k2 = std::span<double>(work).subspan(m, m);
    auto k3 = std::span<double>(work).subspan(2 * m, m);
    auto k4 = std::span<double>(work).subspan(3 * m, m);
    for (int j = 0; j < m; ++j) y[j] = xa[j] + 0.5 * h * k1[j];
    system.rhs(ta + 0.5 * h, y, k2);
    for (int j = 0; j < m; ++j) y[j] = xa[j] + 0.5 * h * k2[j];
    system.rhs(ta + 0.5 * h, y, k3);
    for (int j = 0; j < m; ++j) y[j] = xa[j] + h * k3[j];
    system.rhs(tb, y, k4);
    for (int j = 0; j < m; ++j) {
      xb[j] = xa[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    stats.steps += 1;
    if (diverged(as_span(xb), o.overflow_guard)) {
      throw IntegrationError(divergence_message(tb),
                             sampler.finish(layout, stats, true));
    }
    system.rhs(tb, as_span(xb), as_span(fb));
    stats.rhs_evals += 4;
    sampler.step(ta, tb, as_span(xa), as_span(fa), as_span(xb), as_span(fb));
    xa.swap(xb);
    fa.swap(fb);
  }
  return sampler.finish(layout, stats, false);
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double scaled_norm(const Vec& v, const Vec& x, const Vec& y, double atol,
                   double rtol) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(x[i]), std::abs(y[i]));
    const double r = v[i] / sc;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(v.size()));
}

Trajectory integrate_dp45(const System& system, const Vec& x0, double t0,
                          double t1, const IntegratorOptions& o) {
  const int m = static_cast<int>(x0.size());
  const StateLayout layout = layout_or_default(system, m);
  const std::vector<double> grid = output_grid(t0, t1, o.output_dt);
  if (!(o.rtol > 0.0) || !(o.atol >= 0.0)) {
    throw ConfigError("integrate: invalid tolerances");
  }

  IntegratorStats stats;
  stats.method = Method::kDormandPrince45;
  stats.rtol = o.rtol;
  stats.atol = o.atol;

  auto f = [&](double t, const Vec& x, Vec& dx) {
    system.rhs(t, as_span(x), as_span(dx));
    ++stats.rhs_evals;
  };

  Sampler sampler(grid, m, 1e-12 * std::max(1.0, std::abs(t1)));
  sampler.start(as_span(x0));

  Vec x = x0;
  Vec k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m);
  Vec y(m), xn(m), err(m);
  f(t0, x, k1);

  // Initial step guess (Hairer, Norsett & Wanner, II.4).
  double h;
  {
    const double d0 = scaled_norm(x, x, x, o.atol, o.rtol);
    const double d1 = scaled_norm(k1, x, x, o.atol, o.rtol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t1 - t0);
    y = x + h0 * k1;
    f(t0 + h0, y, k2);
    const double d2 = scaled_norm(k2 - k1, x, x, o.atol, o.rtol) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dm, 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, o.max_step});
  }

  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safe = 0.9;
  constexpr double facc1 = 1.0 / 0.2; // max shrink divisor
  constexpr double facc2 = 1.0 / 10.0; // max growth divisor
  double err_old = 1e-4;
  bool last_rejected = false;
  double t = t0;

  while (t < t1) {
    if (stats.steps + stats.rejected > o.max_steps) {
      throw IntegrationError("integration exceeded the step budget",
                             sampler.finish(layout, stats, true));
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "step size underflow at t = " << t;
      throw IntegrationError(os.str(), sampler.finish(layout, stats, true));
    }
    bool final_step = false;
    if (t + h >= t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
      h = t1 - t;
      final_step = true;
    }

    y = x + h * (a21 * k1);
    f(t + c2 * h, y, k2);
    y = x + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, y, k3);
    y = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, y, k4);
    y = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, y, k5);
    y = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, y, k6);
    xn = x + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, xn, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = scaled_norm(err, x, xn, o.atol, o.rtol);

    if (!std::isfinite(en)) {
      // Shrink hard and retry; the overflow guard below catches true blowup.
      h *= 0.1;
      ++stats.rejected;
      last_rejected = true;
      continue;
    }

    const double fac11 = std::pow(std::max(en, 1e-300), expo1);
    if (en <= 1.0) {
      const double tb = final_step ? t1 : t + h;
      if (diverged(as_span(xn), o.overflow_guard)) {
        throw IntegrationError(divergence_message(tb),
                               sampler.finish(layout, stats, true));
      }
      ++stats.steps;
      sampler.step(t, tb, as_span(x), as_span(k1), as_span(xn), as_span(k7));
      t = tb;
      x.swap(xn);
      k1.swap(k7);
      double fac = fac11 / std::pow(err_old, beta);
      fac = std::clamp(fac / safe, facc2, facc1);
      double hn = h / fac;
      if (last_rejected) hn = std::min(hn, h);
      err_old = std::max(en, 1e-4);
      last_rejected = false;
      h = std::min(hn, o.max_step);
      if (final_step) break;
    } else {
      ++stats.rejected;
      h = h / std::min(facc1, fac11 / safe);
      last_rejected = true;
    }
  }
  return sampler.finish(layout, stats, false);
}

} // namespace

Trajectory integrate(const System& system, const Vec& x0, double t0, double t1,
                     const IntegratorOptions& options) {
  if (x0.size() == 0 || x0.size() > kMaxStateDim) {
    throw ConfigError("integrate: unsupported state dimension");
  }
  if (!(t1 > t0)) throw PreconditionError("integrate: empty time span");
  {
    Vec f0(x0.size());
    system.rhs(t0, as_span(x0), as_span(f0));
    if (diverged(as_span(x0), options.overflow_guard) ||
        diverged(as_span(f0), std::numeric_limits<double>::max())) {
      throw PreconditionError("integrate: right-hand side not finite at x0");
    }
  }
  switch (options.method) {
  case Method::kRk4:
    return integrate_rk4(system, x0, t0, t1, options);
  case Method::kDormandPrince45:
    return integrate_dp45(system, x0, t0, t1, options);
  }
  throw ConfigError("integrate: unknown method");
}

} // namespace nlreg
