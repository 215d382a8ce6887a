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
#ifndef NLREG_CLI_REPORT_HPP
#define NLREG_CLI_REPORT_HPP

#include "nlreg/pipeline.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace nlreg::cli {

/// Results of one `run`. Absent members were not requested.
struct RunResults {
  std::optional<InternalModelResidual> verify;
  std::optional<InvarianceReport> invariance;
  std::optional<Lemma1Report> lemma1;
  std::optional<Lemma2Report> lemma2;
  std::string lemma2_note; ///< set when lemma2 was skipped
  std::optional<RunReport> regulation;
  std::string error;       ///< pipeline failure before or during experiments

  /// practical, plus asymptotic on exponentially attractive benchmarks.
  bool regulation_passed(bool exponentially_attractive) const;
  bool passed(bool exponentially_attractive) const;
};

/// Ordered key = value lines.
class ReportWriter {
public:
  void put(const std::string& key, const std::string& value);
  void put(const std::string& key, double value);
  void put(const std::string& key, int value);
  void put(const std::string& key, long value);
  void put(const std::string& key, bool value);
  void put(const std::string& key, const std::optional<double>& value);
  void put_fit(const std::string& prefix, const std::optional<DecayFit>& fit);
  std::string str() const;

private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::string format_report(const RegulatorDesign& design, const RunResults& results);

/// Columns t, e, u, v, z_*, w_*, xi_*, chi_norm, graph_dist.
std::string csv_header(int n, int r, int d);
void write_trajectory_csv(std::ostream& out, const Scenario& sc, const ControllerConfig& cc,
                          const Trajectory& traj, int distance_stride);

/// Writes text to path, replacing any existing file.
void write_file(const std::string& path, const std::string& text);

} // namespace nlreg::cli

#endif // NLREG_CLI_REPORT_HPP
