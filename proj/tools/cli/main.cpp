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

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <string>

namespace {

using nlreg::cli::RunConfig;

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value configuration file");
    for (const std::string& key : RunConfig::keys()) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      options[key] = app->add_option(flag, values[key], "overrides '" + key + "'");
    }
  }

  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    for (const std::string& key : RunConfig::keys()) {
      if (options.at(key)->count() > 0) cfg.set(key, values.at(key));
    }
    return cfg;
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear output regulation with an adaptive internal model"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "design the regulator and run experiments");
  ConfigFlags run_flags;
  run_flags.attach(run);

  CLI::App* sweep = app.add_subcommand("sweep", "repeat a run over a parameter grid");
  ConfigFlags sweep_flags;
  sweep_flags.attach(sweep);
  std::string parameter;
  std::string grid_text;
  sweep->add_option("--param", parameter, "kappa, k or mu")->required();
  sweep->add_option("--grid", grid_text, "comma-separated values")->required();

  CLI::App* list = app.add_subcommand("benchmarks", "list builtin benchmarks");

  CLI::App* verify = app.add_subcommand("verify", "internal-model residuals only");
  ConfigFlags verify_flags;
  verify_flags.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nlreg::cli::kExitConfig;
  }

  try {
    if (*run) return nlreg::cli::cmd_run(run_flags.resolve(), std::cout);
    if (*sweep) {
      return nlreg::cli::cmd_sweep(sweep_flags.resolve(), parameter,
                                   nlreg::cli::parse_grid(grid_text), std::cout);
    }
    if (*list) return nlreg::cli::cmd_benchmarks(std::cout);
    if (*verify) return nlreg::cli::cmd_verify(verify_flags.resolve(), std::cout);
  } catch (const nlreg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nlreg::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nlreg::cli::kExitFail;
  }
  return nlreg::cli::kExitConfig;
}
