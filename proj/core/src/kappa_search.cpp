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
#include "nlreg/kappa_search.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlreg {

KappaSearchResult find_kappa_star(const Scenario& sc, const InternalModel& im,
                                  const GainDesign& base,
                                  const KappaSearchOptions& options) {
  if (!(options.kappa_max > 1.0) || !(options.epsilon > 0.0)) {
    throw ConfigError("find_kappa_star: invalid search bounds");
  }
  KappaSearchResult res;
  res.kappa_lb = base.kappa_lb;
  res.start = std::max(1.0 + options.epsilon, base.kappa_lb);
  double best_kappa = res.start;
  double best_rate = -std::numeric_limits<double>::infinity();

  for (double kappa = res.start; kappa <= options.kappa_max; kappa *= 2.0) {
    const GainDesign gains = base.with_kappa(kappa);
    const Lemma1Report rep = lemma1_experiment(sc, im, gains, options.lemma1);
    KappaTrial trial;
    trial.kappa = kappa;
    trial.rate = rep.chi_rate();
    trial.integrated = rep.failed_runs == 0;
    res.trials.push_back(trial);
    if (!trial.integrated) {
      std::ostringstream os;
      os << "find_kappa_star: integration failed at kappa = " << kappa << " ("
         << rep.message << ")";
      throw SearchError(os.str(), best_kappa, best_rate);
    }
    if (trial.rate > best_rate) {
      best_rate = trial.rate;
      best_kappa = kappa;
    }
    if (trial.rate >= options.alpha_min) {
      res.kappa_star = kappa;
      res.rate = trial.rate;
      return res;
    }
  }
  std::ostringstream os;
  os << "find_kappa_star: no kappa up to " << options.kappa_max
     << " reached decay rate " << options.alpha_min << " (best " << best_rate
     << " at kappa = " << best_kappa << ")";
  throw SearchError(os.str(), best_kappa, best_rate);
}

} // namespace nlreg
