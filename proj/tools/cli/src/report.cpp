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
#include "nlreg_cli/report.hpp"

#include "nlreg_cli/config.hpp"

#include "nlreg/errors.hpp"

#include <fstream>

namespace nlreg::cli {

namespace {

std::string join_vec(const Vec& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::string join_poles(const std::vector<Complex>& poles) {
  std::string out;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (i > 0) out += ',';
    out += format_complex(poles[i]);
  }
  return out;
}

} // namespace

bool RunResults::regulation_passed(bool exponentially_attractive) const {
  if (!regulation) return false;
  if (!regulation->practical()) return false;
  return !exponentially_attractive || regulation->asymptotic();
}

bool RunResults::passed(bool exponentially_attractive) const {
  if (!error.empty()) return false;
  if (verify && !verify->passed()) return false;
  if (invariance && !invariance->passed()) return false;
  if (lemma1 && !lemma1->passed()) return false;
  if (lemma2 && !lemma2->passed()) return false;
  if (regulation && !regulation_passed(exponentially_attractive)) return false;
  return true;
}

void ReportWriter::put(const std::string& key, const std::string& value) {
  lines_.emplace_back(key, value);
}
void ReportWriter::put(const std::string& key, double value) { put(key, format_double(value)); }
void ReportWriter::put(const std::string& key, int value) { put(key, std::to_string(value)); }
void ReportWriter::put(const std::string& key, long value) { put(key, std::to_string(value)); }
void ReportWriter::put(const std::string& key, bool value) {
  put(key, std::string(value ? "true" : "false"));
}
void ReportWriter::put(const std::string& key, const std::optional<double>& value) {
  put(key, value ? format_double(*value) : std::string("none"));
}

void ReportWriter::put_fit(const std::string& prefix, const std::optional<DecayFit>& fit) {
  if (!fit) {
    put(prefix + "_alpha", std::string("none"));
    return;
  }
  put(prefix + "_alpha", fit->alpha);
  put(prefix + "_m", fit->m);
  put(prefix + "_t_begin", fit->t_begin);
  put(prefix + "_t_end", fit->t_end);
  put(prefix + "_residual", fit->residual);
  put(prefix + "_samples", fit->samples);
}

std::string ReportWriter::str() const {
  std::string out;
  for (const auto& [k, v] : lines_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::string format_report(const RegulatorDesign& design, const RunResults& results) {
  const Scenario& sc = design.scenario;
  const GainDesign& g = design.gains;
  ReportWriter w;
  w.put("scenario", sc.id);
  w.put("linear_baseline", design.linear_fit.has_value());
  w.put("d", g.d);
  w.put("poles", join_poles(g.poles));
  w.put("g0", join_vec(g.g0));
  w.put("g", join_vec(g.g));
  w.put("kappa", g.kappa);
  w.put("kappa_source", std::string(to_string(design.kappa_source)));
  w.put("kappa_lb", g.kappa_lb);
  w.put("kappa_ge_lb", g.kappa >= g.kappa_lb);
  if (design.search) {
    w.put("kappa_search_start", design.search->start);
    w.put("kappa_search_rate", design.search->rate);
    w.put("kappa_search_trials", static_cast<int>(design.search->trials.size()));
  }
  if (!design.search_note.empty()) w.put("kappa_search_note", design.search_note);
  w.put("k", design.k);
  w.put("kbar", design.k - g.g[0]);
  w.put("bound_c", design.im.driver().bound());
  w.put("lipschitz", design.im.driver().lipschitz());
  w.put("eigen_error", g.eigen_error);
  w.put("lyapunov_residual", g.lyapunov_residual);
  w.put("p_norm", g.p.operatorNorm());
  w.put("cloud_points", sc.attractor->size());
  w.put("tau_box_lower", join_vec(design.tau_box.lower()));
  w.put("tau_box_upper", join_vec(design.tau_box.upper()));
  if (design.linear_fit) {
    w.put("linear_fit_a", join_vec(design.linear_fit->a));
    w.put("linear_fit_rms", design.linear_fit->rms_residual);
  }

  if (results.verify) {
    const InternalModelResidual& v = *results.verify;
    w.put("verify_chain_residual", v.chain);
    w.put("verify_output_residual", v.output);
    w.put("verify_samples", v.samples);
    w.put("verify_tol", v.tol);
    w.put("verify_passed", v.passed());
  }
  if (results.invariance) {
    const InvarianceReport& v = *results.invariance;
    w.put("invariance_points", v.points);
    w.put("invariance_max_distance", v.max_distance);
    w.put("invariance_max_chi", v.max_chi);
    w.put("invariance_tol", v.tol);
    w.put("invariance_passed", v.passed());
  }
  if (results.lemma1) {
    const Lemma1Report& v = *results.lemma1;
    w.put("lemma1_runs", v.runs);
    w.put("lemma1_failed_runs", v.failed_runs);
    w.put("lemma1_max_terminal_distance", v.max_terminal_distance);
    w.put("lemma1_tol_attract", v.tol_attract);
    w.put_fit("lemma1_chi_fit", v.chi_fit);
    w.put_fit("lemma1_distance_fit", v.distance_fit);
    if (!v.message.empty()) w.put("lemma1_message", v.message);
    w.put("lemma1_passed", v.passed());
  }
  if (results.lemma2) {
    const Lemma2Report& v = *results.lemma2;
    for (const Lemma2SizeResult& s : v.per_size) {
      const std::string key = "lemma2_size_" + format_double(s.size);
      w.put(key + "_median_alpha", s.median_alpha);
      w.put(key + "_min_alpha", s.min_alpha);
    }
    w.put("lemma2_min_alpha", v.min_alpha);
    w.put("lemma2_rate_ratio", v.rate_ratio);
    w.put("lemma2_alpha_req", v.alpha_req);
    w.put("lemma2_ratio_max", v.ratio_max);
    if (!v.message.empty()) w.put("lemma2_message", v.message);
    w.put("lemma2_passed", v.passed());
  } else if (!results.lemma2_note.empty()) {
    w.put("lemma2", std::string("skipped"));
    w.put("lemma2_message", results.lemma2_note);
  }
  if (results.regulation) {
    const RunReport& r = *results.regulation;
    w.put("epsilon", r.epsilon);
    w.put("epsilon_asym", r.epsilon_asym);
    w.put("epsilon_fail", r.epsilon_fail);
    w.put("horizon", r.horizon);
    w.put("tail_begin", r.tail_begin);
    w.put("runs", r.runs);
    w.put("failed_runs", r.failed_runs());
    w.put("tail_sup_e", r.tail_sup_e);
    w.put("t_bar_max", r.t_bar_max);
    w.put_fit("e_fit", r.e_fit);
    w.put_fit("chi_fit", r.chi_fit);
    w.put_fit("distance_fit", r.distance_fit);
    w.put("integrator", std::string(to_string(r.integrator.method)));
    if (r.integrator.method == Method::kRk4) {
      w.put("integrator_step", r.integrator.step);
    } else {
      w.put("integrator_rtol", r.integrator.rtol);
      w.put("integrator_atol", r.integrator.atol);
    }
    w.put("integrator_steps", r.steps);
    w.put("integrator_rejected", r.rejected);
    w.put("practical", r.practical());
    w.put("asymptotic", r.asymptotic());
    w.put("regulation_failed", r.regulation_failed());
    w.put("regulation_passed", results.regulation_passed(sc.exponentially_attractive));
  }
  if (!results.error.empty()) w.put("error", results.error);
  w.put("verdict", std::string(results.passed(sc.exponentially_attractive) ? "pass" : "fail"));
  return w.str();
}

std::string csv_header(int n, int r, int d) {
  std::string out = "t,e,u,v";
  for (int i = 1; i <= n; ++i) out += ",z_" + std::to_string(i);
  for (int i = 1; i <= r; ++i) out += ",w_" + std::to_string(i);
  for (int i = 1; i <= d; ++i) out += ",xi_" + std::to_string(i);
  out += ",chi_norm,graph_dist\n";
  return out;
}

void write_trajectory_csv(std::ostream& out, const Scenario& sc, const ControllerConfig& cc,
                          const Trajectory& traj, int distance_stride) {
  const int n = sc.n();
  const int r = sc.r();
  const int d = sc.d();
  const Signals sig = closed_loop_signals(sc, cc, traj, distance_stride);
  out << csv_header(n, r, d);
  std::string line;
  for (int i = 0; i < traj.size(); ++i) {
    const auto col = traj.x.col(i);
    line = format_double(sig.t[i]);
    auto add = [&line](double v) {
      line += ',';
      line += format_double(v);
    };
    add(sig.e[i]);
    add(sig.u[i]);
    add(sig.v[i]);
    for (int j = 0; j < n; ++j) add(col[j]);
    for (int j = 0; j < r; ++j) add(col[n + 1 + d + j]);
    for (int j = 0; j < d; ++j) add(col[n + 1 + j]);
    add(sig.chi_norm[i]);
    add(sig.graph_dist[i]);
    line += '\n';
    out << line;
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

} // namespace nlreg::cli
