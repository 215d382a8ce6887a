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
#ifndef NLREG_ANALYSIS_HPP
#define NLREG_ANALYSIS_HPP

#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace nlreg {

struct FitWindow {
  double begin = -std::numeric_limits<double>::infinity();
  double end = std::numeric_limits<double>::infinity();
};

/// |x(t)| ~ M exp(-alpha t) |x(0)| fitted on log magnitudes.
struct DecayFit {
  double alpha = 0.0;
  double m = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  double residual = 0.0; ///< RMS of the log-linear fit
  int samples = 0;
};

inline constexpr double kDecayFloor = 1e-12;

/// Least squares on (t, log mag) over samples in the window above the floor.
/// Throws FitError with fewer than `min_samples` usable points.
DecayFit fit_decay(std::span<const double> t, std::span<const double> mag,
                   FitWindow window = {}, double floor = kDecayFloor,
                   int min_samples = 10);

/// Window from the start of the series up to the first time the magnitude
/// falls below `relative` times its initial value, widened to hold at least
/// `min_samples` samples above the floor when possible.
FitWindow decay_window(std::span<const double> t, std::span<const double> mag,
                       double relative = 1e-8, double floor = kDecayFloor,
                       int min_samples = 10);

/// max |x| over samples with t in [t_begin, t_end].
double sup_over(std::span<const double> t, std::span<const double> x,
                double t_begin, double t_end);

/// Earliest sample time after which |x| <= eps through the end of the
/// series; nullopt if the last sample still exceeds eps.
std::optional<double> settling_time(std::span<const double> t,
                                    std::span<const double> x, double eps);

/// Pointwise median across equally long curves.
std::vector<double> median_curve(const std::vector<std::vector<double>>& curves);

double median(std::vector<double> values);

} // namespace nlreg

#endif // NLREG_ANALYSIS_HPP
