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
#ifndef NLREG_CLI_CONFIG_HPP
#define NLREG_CLI_CONFIG_HPP

#include "nlreg/gain.hpp"
#include "nlreg/integrate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlreg::cli {

/// Flat key = value run configuration. Every field has a key; see keys().
struct RunConfig {
  std::string benchmark = "vdp";
  double mu = 1.0;
  std::optional<int> d;                 // auto
  std::vector<Complex> poles;           // empty: default
  std::optional<double> kappa;          // auto
  std::optional<double> k;              // auto
  bool linear_baseline = false;
  std::vector<std::string> experiments{"regulation"};

  double epsilon = 1e-2;
  double epsilon_asym = 1e-4;
  double epsilon_fail = 1e-2;
  double horizon = 100.0;
  double tail_begin = 80.0;

  Method integrator = Method::kRk4;
  double step = 1e-3;
  double rtol = 1e-9;
  double atol = 1e-12;
  double output_dt = 0.01;

  int runs = 50;
  std::uint64_t seed = 1;
  int attractor_samples = 100;
  double transient_time = 20.0;
  double sample_time = 10.0;
  double inflation = 0.25;
  double alpha_min = 0.5;
  double kappa_max = 1e4;
  double lemma1_horizon = 40.0;

  std::string output_dir = "out";
  int csv_runs = 1;
  double csv_distance_dt = 0.1; ///< graph_dist column spacing; NaN between

  /// Assigns one key from its textual value. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  static const std::vector<std::string>& keys();
  static const std::vector<std::string>& experiment_names();

  /// Parses the file format; later lines override earlier ones.
  static RunConfig parse(std::string_view text, RunConfig base);
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path, RunConfig base);
  static RunConfig load(const std::string& path);
  std::string serialize() const;

  void validate() const;
  bool wants(std::string_view experiment) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);
std::string format_complex(Complex c);
Complex parse_complex(std::string_view text);

/// Comma-separated numbers.
std::vector<double> parse_grid(std::string_view text);

} // namespace nlreg::cli

#endif // NLREG_CLI_CONFIG_HPP
