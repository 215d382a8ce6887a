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
#ifndef NLREG_CLI_COMMANDS_HPP
#define NLREG_CLI_COMMANDS_HPP

#include "nlreg_cli/config.hpp"
#include "nlreg_cli/report.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace nlreg::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

DesignOptions design_options(const RunConfig& cfg);
Benchmark benchmark_for(const RunConfig& cfg);
IntegratorOptions integrator_options(const RunConfig& cfg);
RegulationOptions regulation_options(const RunConfig& cfg);

/// Runs the requested experiments on an existing design.
RunResults run_experiments(const RunConfig& cfg, const RegulatorDesign& design);

/**
 * Writes config.txt, report.txt and run_NNN.csv for the first csv_runs
 * regulation runs into `dir` and returns the exit code. The results are
 * moved into `results` when given.
 */
int run_into(const RunConfig& cfg, const RegulatorDesign& design, const std::string& dir,
             std::ostream& log, RunResults* results = nullptr);

int cmd_run(const RunConfig& cfg, std::ostream& log);

/// parameter is kappa, k or mu. Points go to output_dir/point_NNN; the
/// aggregate to output_dir/sweep.csv.
int cmd_sweep(const RunConfig& cfg, const std::string& parameter,
              const std::vector<double>& grid, std::ostream& log);

int cmd_benchmarks(std::ostream& out);

/// Internal-model residuals only; no gain search.
int cmd_verify(const RunConfig& cfg, std::ostream& out);

} // namespace nlreg::cli

#endif // NLREG_CLI_COMMANDS_HPP
