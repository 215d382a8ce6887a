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
#include "nlreg_cli/commands.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nlreg::cli {

namespace fs = std::filesystem;

namespace {

std::string numbered(const std::string& stem, int i, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03d", i);
  return stem + buf + ext;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory '" + dir + "': " + ec.message());
}

std::string failure_report(const RunConfig& cfg, const std::string& error) {
  ReportWriter w;
  w.put("scenario", cfg.benchmark);
  w.put("linear_baseline", cfg.linear_baseline);
  w.put("error", error);
  w.put("verdict", std::string("fail"));
  return w.str();
}

int stride_for(double spacing, double output_dt) {
  return std::max(1, static_cast<int>(std::lround(spacing / output_dt)));
}

} // namespace

Benchmark benchmark_for(const RunConfig& cfg) {
  Benchmark b = find_benchmark(cfg.benchmark, BenchmarkParams{cfg.mu});
  b.sets.runs = cfg.runs;
  b.sets.seed = cfg.seed;
  return b;
}

IntegratorOptions integrator_options(const RunConfig& cfg) {
  IntegratorOptions io;
  io.method = cfg.integrator;
  io.step = cfg.step;
  io.rtol = cfg.rtol;
  io.atol = cfg.atol;
  io.output_dt = cfg.output_dt;
  return io;
}

DesignOptions design_options(const RunConfig& cfg) {
  DesignOptions o;
  o.d = cfg.d;
  o.poles = cfg.poles;
  o.kappa = cfg.kappa;
  o.k = cfg.k;
  o.inflation = cfg.inflation;
  o.attractor.n_samples = cfg.attractor_samples;
  o.attractor.transient_time = cfg.transient_time;
  o.attractor.sample_time = cfg.sample_time;
  o.search.alpha_min = cfg.alpha_min;
  o.search.kappa_max = cfg.kappa_max;
  o.linear_baseline = cfg.linear_baseline;
  return o;
}

RegulationOptions regulation_options(const RunConfig& cfg) {
  RegulationOptions o;
  o.epsilon = cfg.epsilon;
  o.epsilon_asym = cfg.epsilon_asym;
  o.epsilon_fail = cfg.epsilon_fail;
  o.horizon = cfg.horizon;
  o.tail_begin = cfg.tail_begin;
  o.runs = cfg.runs;
  o.integrator = integrator_options(cfg);
  o.keep_trajectories = cfg.csv_runs > 0;
  return o;
}

RunResults run_experiments(const RunConfig& cfg, const RegulatorDesign& design) {
  const Scenario& sc = design.scenario;
  IntegratorOptions io = integrator_options(cfg);
  RunResults res;
  try {
    if (cfg.wants("verify")) {
      res.verify = verify_internal_model(design.im, *sc.tau, *sc.attractor, sc.plant);
    }
    if (cfg.wants("invariance")) {
      InvarianceOptions o;
      o.integrator = io;
      res.invariance = invariance_experiment(sc, design.im, design.gains, o);
    }
    if (cfg.wants("lemma1")) {
      Lemma1Options o;
      o.horizon = cfg.lemma1_horizon;
      o.runs = cfg.runs;
      o.integrator = io;
      res.lemma1 = lemma1_experiment(sc, design.im, design.gains, o);
    }
    if (cfg.wants("lemma2")) {
      if (!sc.exponentially_attractive) {
        res.lemma2_note = "benchmark is not flagged exponentially attractive";
      } else {
        Lemma2Options o;
        o.integrator = io;
        res.lemma2 = lemma2_experiment(sc, design.im, design.gains, o);
      }
    }
    if (cfg.wants("regulation")) {
      res.regulation = regulation_experiment(sc, design.controller(), regulation_options(cfg));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  return res;
}

int run_into(const RunConfig& cfg, const RegulatorDesign& design, const std::string& dir,
             std::ostream& log, RunResults* results) {
  ensure_dir(dir);
  write_file(dir + "/config.txt", cfg.serialize());
  RunResults res = run_experiments(cfg, design);
  const Scenario& sc = design.scenario;
  if (res.regulation) {
    const int count =
        std::min(cfg.csv_runs, static_cast<int>(res.regulation->trajectories.size()));
    const int stride = stride_for(cfg.csv_distance_dt, cfg.output_dt);
    const ControllerConfig cc = design.controller();
    for (int i = 0; i < count; ++i) {
      const std::string path = dir + "/" + numbered("run_", i, ".csv");
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw ConfigError("cannot write '" + path + "'");
      write_trajectory_csv(out, sc, cc, res.regulation->trajectories[i], stride);
    }
  }
  write_file(dir + "/report.txt", format_report(design, res));
  const bool ok = res.passed(sc.exponentially_attractive);
  log << sc.id << ": " << (ok ? "pass" : "fail");
  if (res.regulation) {
    log << " tail_sup_e=" << format_double(res.regulation->tail_sup_e);
  }
  if (!res.error.empty()) log << " error: " << res.error;
  log << "\n";
  if (results) *results = std::move(res);
  return ok ? kExitPass : kExitFail;
}

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Benchmark bench = benchmark_for(cfg);
  std::optional<RegulatorDesign> design;
  try {
    design = design_regulator(bench, design_options(cfg));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    ensure_dir(cfg.output_dir);
    write_file(cfg.output_dir + "/config.txt", cfg.serialize());
    write_file(cfg.output_dir + "/report.txt", failure_report(cfg, e.what()));
    log << cfg.benchmark << ": fail error: " << e.what() << "\n";
    return kExitFail;
  }
  return run_into(cfg, *design, cfg.output_dir, log);
}

int cmd_sweep(const RunConfig& cfg, const std::string& parameter,
              const std::vector<double>& grid, std::ostream& log) {
  if (parameter != "kappa" && parameter != "k" && parameter != "mu") {
    throw ConfigError("sweep parameter must be kappa, k or mu");
  }
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  cfg.validate();
  ensure_dir(cfg.output_dir);

  std::ostringstream agg;
  agg << "point," << parameter
      << ",exit_code,tail_sup_e,t_bar_max,e_fit_alpha,chi_fit_alpha,distance_fit_alpha,"
         "verdict\n";
  const auto rate = [](const std::optional<DecayFit>& f) {
    return f ? format_double(f->alpha) : std::string("nan");
  };

  std::optional<RegulatorDesign> base;
  std::string base_error;
  int base_code = kExitPass;
  if (parameter != "mu") {
    try {
      base = design_regulator(benchmark_for(cfg), design_options(cfg));
    } catch (const ConfigError& e) {
      base_error = e.what();
      base_code = kExitConfig;
    } catch (const std::exception& e) {
      base_error = e.what();
      base_code = kExitFail;
    }
  }

  int worst = kExitPass;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    RunConfig pc = cfg;
    const std::string dir = cfg.output_dir + "/" + numbered("point_", static_cast<int>(i), "");
    pc.output_dir = dir;
    int code = kExitPass;
    std::optional<RunReport> reg;
    std::string error;
    try {
      pc.set(parameter, format_double(grid[i]));
      pc.validate();
      std::optional<RegulatorDesign> design;
      if (parameter == "mu") {
        design = design_regulator(benchmark_for(pc), design_options(pc));
      } else if (!base) {
        code = base_code;
        error = base_error;
      } else if (parameter == "kappa") {
        design = redesign(*base, grid[i], pc.k);
        design->search.reset();
        design->search_note.clear();
      } else {
        design = *base;
        design->k = grid[i];
      }
      if (design) {
        RunResults res;
        code = run_into(pc, *design, dir, log, &res);
        reg = std::move(res.regulation);
      }
    } catch (const ConfigError& e) {
      code = kExitConfig;
      error = e.what();
    } catch (const std::exception& e) {
      code = kExitFail;
      error = e.what();
    }
    if (!error.empty()) {
      log << "point " << i << ": " << error << "\n";
      try {
        ensure_dir(dir);
        write_file(dir + "/report.txt", failure_report(pc, error));
      } catch (const ConfigError&) {
      }
    }
    worst = std::max(worst, code);
    agg << i << ',' << format_double(grid[i]) << ',' << code << ',';
    if (reg) {
      agg << format_double(reg->tail_sup_e) << ','
          << (reg->t_bar_max ? format_double(*reg->t_bar_max) : std::string("nan")) << ','
          << rate(reg->e_fit) << ',' << rate(reg->chi_fit) << ',' << rate(reg->distance_fit);
    } else {
      agg << "nan,nan,nan,nan,nan";
    }
    agg << ',' << (code == kExitPass ? "pass" : "fail") << '\n';
  }
  write_file(cfg.output_dir + "/sweep.csv", agg.str());
  return worst;
}

int cmd_benchmarks(std::ostream& out) {
  for (const Benchmark& b : registry()) {
    out << b.id << "  n=" << b.plant.n << " r=" << b.plant.r << " d=" << b.d
        << " exp_attractive=" << (b.exponentially_attractive ? "yes" : "no")
        << " linear_baseline_expected=" << (b.linear_baseline_expected_pass ? "pass" : "fail")
        << "  " << b.description << "\n";
  }
  return kExitPass;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  DesignOptions o = design_options(cfg);
  // The dilation plays no role in the residuals; fixing it skips the search.
  o.kappa = 2.0;
  o.k.reset();
  const RegulatorDesign design = design_regulator(benchmark_for(cfg), o);
  const Scenario& sc = design.scenario;
  const InternalModelResidual v =
      verify_internal_model(design.im, *sc.tau, *sc.attractor, sc.plant);
  ReportWriter w;
  w.put("scenario", sc.id);
  w.put("linear_baseline", cfg.linear_baseline);
  w.put("d", sc.d());
  w.put("bound_c", design.im.driver().bound());
  w.put("lipschitz", design.im.driver().lipschitz());
  w.put("verify_chain_residual", v.chain);
  w.put("verify_output_residual", v.output);
  w.put("verify_samples", v.samples);
  w.put("verify_tol", v.tol);
  w.put("verify_passed", v.passed());
  out << w.str();
  return v.passed() ? kExitPass : kExitFail;
}

} // namespace nlreg::cli
