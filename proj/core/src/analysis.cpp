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
#include "nlreg/analysis.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlreg {

namespace {

bool usable(double t, double m, const FitWindow& w, double floor) {
  return t >= w.begin && t <= w.end && std::isfinite(m) && m > floor;
}

} // namespace

DecayFit fit_decay(std::span<const double> t, std::span<const double> mag,
                   FitWindow window, double floor, int min_samples) {
  if (t.size() != mag.size()) throw ConfigError("fit_decay: series length mismatch");
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (usable(t[i], mag[i], window, floor)) {
      ts.push_back(t[i]);
      ys.push_back(std::log(mag[i]));
    }
  }
  const int count = static_cast<int>(ts.size());
  if (count < std::max(2, min_samples)) {
    throw FitError("fit_decay: " + std::to_string(count) +
                   " usable samples in the window, need " +
                   std::to_string(std::max(2, min_samples)));
  }
  double tm = 0.0;
  double ym = 0.0;
  for (int i = 0; i < count; ++i) {
    tm += ts[i];
    ym += ys[i];
  }
  tm /= count;
  ym /= count;
  double stt = 0.0;
  double sty = 0.0;
  for (int i = 0; i < count; ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    sty += (ts[i] - tm) * (ys[i] - ym);
  }
  if (!(stt > 0.0)) throw FitError("fit_decay: degenerate time window");
  const double slope = sty / stt;
  const double intercept = ym - slope * tm;
  double ss = 0.0;
  for (int i = 0; i < count; ++i) {
    const double r = ys[i] - (intercept + slope * ts[i]);
    ss += r * r;
  }

  DecayFit fit;
  fit.alpha = -slope;
  fit.residual = std::sqrt(ss / count);
  fit.samples = count;
  fit.t_begin = ts.front();
  fit.t_end = ts.back();
  const double m0 = !mag.empty() && mag[0] > floor ? mag[0] : std::exp(ys.front());
  fit.m = std::exp(intercept) / m0;
  return fit;
}

FitWindow decay_window(std::span<const double> t, std::span<const double> mag,
                       double relative, double floor, int min_samples) {
  FitWindow w;
  if (t.empty()) return w;
  w.begin = t.front();
  const double threshold = std::max(relative * mag[0], floor);
  std::size_t cut = t.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(mag[i] >= threshold)) {
      cut = i;
      break;
    }
  }
  int above = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::isfinite(mag[i]) && mag[i] > floor) {
      ++above;
      last = i;
      if (i >= cut && above >= min_samples) break;
    }
  }
  if (cut < t.size()) w.end = std::max(t[cut], t[last]);
  return w;
}

double sup_over(std::span<const double> t, std::span<const double> x,
                double t_begin, double t_end) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t_begin && t[i] <= t_end) {
      const double a = std::abs(x[i]);
      if (!(a <= s)) s = a; // propagates NaN
    }
  }
  return s;
}

std::optional<double> settling_time(std::span<const double> t,
                                    std::span<const double> x, double eps) {
  if (t.empty()) return std::nullopt;
  std::size_t i = t.size();
  while (i > 0 && std::abs(x[i - 1]) <= eps) --i;
  if (i == t.size()) return std::nullopt;
  return t[i];
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
  return 0.5 * (lo + hi);
}

std::vector<double> median_curve(const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) return {};
  const std::size_t len = curves.front().size();
  std::vector<double> out(len);
  std::vector<double> column(curves.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t k = 0; k < curves.size(); ++k) {
      if (curves[k].size() != len) throw ConfigError("median_curve: ragged curves");
      column[k] = curves[k][i];
    }
    out[i] = median(column);
  }
  return out;
}

} // namespace nlreg
