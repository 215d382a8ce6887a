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
#ifndef NLREG_PIPELINE_HPP
#define NLREG_PIPELINE_HPP

#include "nlreg/bench.hpp"
#include "nlreg/experiments.hpp"
#include "nlreg/kappa_search.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlreg {

struct DesignOptions {
  std::optional<int> d;          ///< order override; linear baseline only
  std::vector<Complex> poles;    ///< empty: all at -1
  std::optional<double> kappa;   ///< unset: searched
  std::optional<double> k;       ///< unset: k = Gamma G + kappa
  double inflation = 0.25;
  double abs_floor = 1e-3;
  AttractorOptions attractor{};
  GridOptions grid{};
  KappaSearchOptions search{};
  bool linear_baseline = false;
};

enum class KappaSource { kFixed, kSearch, kFallback };
std::string_view to_string(KappaSource source);

struct RegulatorDesign {
  Scenario scenario;
  Box tau_box; ///< raw image of the cloud under tau
  InternalModel im;
  GainDesign gains;
  double k = 0.0;
  KappaSource kappa_source = KappaSource::kFixed;
  std::optional<KappaSearchResult> search;
  std::string search_note;
  std::optional<LinearDriverFit> linear_fit;

  ControllerConfig controller() const { return ControllerConfig{im, gains, k}; }
};

/// Attractor estimate, tau chain of order d and graph index.
Scenario build_scenario(const Benchmark& bench, int d, const AttractorOptions& options);

/// Xi box of the benchmark, resized to order d when it differs.
Box xi_box_for_order(const Box& xi_box, int d);

/// attractor -> tau -> saturation -> gains -> kappa.
RegulatorDesign design_regulator(const Benchmark& bench, const DesignOptions& options);

/// Same scenario, new dilation and output gain (k unset: automatic rule).
RegulatorDesign redesign(const RegulatorDesign& base, double kappa,
                         std::optional<double> k = std::nullopt);

/// The automatic output gain Gamma G + kappa.
double auto_k(const GainDesign& gains);

} // namespace nlreg

#endif // NLREG_PIPELINE_HPP
