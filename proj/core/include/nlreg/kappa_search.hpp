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
#ifndef NLREG_KAPPA_SEARCH_HPP
#define NLREG_KAPPA_SEARCH_HPP

#include "nlreg/experiments.hpp"

#include <string>
#include <vector>

namespace nlreg {

struct KappaSearchOptions {
  double alpha_min = 0.5;
  double kappa_max = 1e4;
  double epsilon = 1e-3; ///< the search starts at max(1 + epsilon, 2 L |P|)
  Lemma1Options lemma1 = default_lemma1();

  /// Shorter and cheaper than the full attractiveness experiment: only the
  /// |chi| decay is needed.
  static Lemma1Options default_lemma1() {
    Lemma1Options o;
    o.runs = 20;
    o.horizon = 20.0;
    o.compute_distance = false;
    return o;
  }
};

struct KappaTrial {
  double kappa = 0.0;
  double rate = 0.0;
  bool integrated = true;
};

struct KappaSearchResult {
  double kappa_star = 0.0;
  double start = 0.0;
  double kappa_lb = 0.0;
  double rate = 0.0;
  std::vector<KappaTrial> trials;
};

/// Doubles kappa from the start value until the fitted |chi| rate reaches
/// alpha_min. Throws SearchError past kappa_max or when integration fails.
KappaSearchResult find_kappa_star(const Scenario& sc, const InternalModel& im,
                                  const GainDesign& base,
                                  const KappaSearchOptions& options = {});

} // namespace nlreg

#endif // NLREG_KAPPA_SEARCH_HPP
