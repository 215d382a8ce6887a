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
#include "nlreg/pipeline.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>

namespace nlreg {

std::string_view to_string(KappaSource source) {
  switch (source) {
    case KappaSource::kFixed: return "fixed";
    case KappaSource::kSearch: return "search";
    case KappaSource::kFallback: return "fallback";
  }
  return "unknown";
}

Box xi_box_for_order(const Box& xi_box, int d) {
  if (xi_box.dim() == d) return xi_box;
  return Box::cube(d, xi_box.lower().minCoeff(), xi_box.upper().maxCoeff());
}

Scenario build_scenario(const Benchmark& bench, int d, const AttractorOptions& options) {
  Scenario sc;
  sc.id = bench.id;
  sc.plant = bench.plant;
  sc.exo = bench.exo;
  sc.sets = bench.sets;
  sc.sets.xi_box = xi_box_for_order(bench.sets.xi_box, d);
  sc.exponentially_attractive = bench.exponentially_attractive;
  sc.sets.validate(bench.plant.n, d);

  auto attractor = std::make_shared<AttractorEstimate>(
      estimate_attractor(sc.plant, sc.exo, sc.sets, options));
  TauChain tau = build_tau(sc.plant, sc.exo, d);
  const Box raw = tau_bounding_box(tau, *attractor);
  tau.set_image_box(raw);
  if (!sc.sets.xi_box.contains_in_interior(raw)) {
    throw ConfigError("scenario '" + bench.id +
                      "': Xi box does not contain the tau image of the attractor");
  }
  sc.tau = std::make_shared<const TauChain>(std::move(tau));
  sc.index = std::make_shared<const GraphIndex>(*attractor, *sc.tau);
  sc.attractor = std::move(attractor);
  return sc;
}

double auto_k(const GainDesign& gains) { return gains.g[0] + gains.kappa; }

RegulatorDesign design_regulator(const Benchmark& bench, const DesignOptions& options) {
  const int d = options.d.value_or(bench.d);
  if (d < 1) throw ConfigError("design: d must be positive");
  if (d != bench.d && !options.linear_baseline) {
    throw ConfigError("design: overriding d requires the linear baseline driver");
  }
  std::vector<Complex> poles = options.poles.empty() ? default_poles(d) : options.poles;
  if (static_cast<int>(poles.size()) != d) {
    throw ConfigError("design: number of poles must equal d");
  }

  Scenario sc = build_scenario(bench, d, options.attractor);
  const Box raw = *sc.tau->image_box();
  const Box s_box = raw.inflated(options.inflation, options.abs_floor);

  std::optional<LinearDriverFit> linear_fit;
  SmoothMap driver = bench.driver;
  if (options.linear_baseline) {
    linear_fit = fit_linear_driver(*sc.tau, *sc.attractor);
    driver = linear_driver_map(linear_fit->a);
  }
  InternalModel im(saturate(driver, s_box, raw, options.grid));

  const double lipschitz = im.driver().lipschitz();
  GainDesign base = design_gains(poles, lipschitz, 1.0 + options.search.epsilon);
  const double start = std::max(1.0 + options.search.epsilon, base.kappa_lb);

  KappaSource source = KappaSource::kFixed;
  std::optional<KappaSearchResult> search;
  std::string note;
  GainDesign gains = base;
  if (options.kappa) {
    gains = base.with_kappa(*options.kappa);
  } else {
    try {
      search = find_kappa_star(sc, im, base, options.search);
      gains = base.with_kappa(search->kappa_star);
      source = KappaSource::kSearch;
    } catch (const SearchError& e) {
      if (!options.linear_baseline) throw;
      gains = base.with_kappa(start);
      source = KappaSource::kFallback;
      note = e.what();
    }
  }
  const double k = options.k.value_or(auto_k(gains));
  return RegulatorDesign{std::move(sc), raw, std::move(im), std::move(gains), k,
                         source, std::move(search), std::move(note),
                         std::move(linear_fit)};
}

RegulatorDesign redesign(const RegulatorDesign& base, double kappa,
                         std::optional<double> k) {
  RegulatorDesign out = base;
  out.gains = base.gains.with_kappa(kappa);
  out.k = k.value_or(auto_k(out.gains));
  out.kappa_source = KappaSource::kFixed;
  return out;
}

} // namespace nlreg
