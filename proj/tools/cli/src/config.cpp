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
#include "nlreg_cli/config.hpp"

#include "nlreg/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace nlreg::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for key '" +
                    std::string(key) + "'");
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    bad_value(key, text);
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  bad_value(key, text);
}

double parse_number(std::string_view key, std::string_view text) {
  try {
    return parse_double(text);
  } catch (const ConfigError&) {
    bad_value(key, text);
  }
}

std::optional<double> parse_auto_double(std::string_view key, std::string_view text) {
  if (trim(text) == "auto") return std::nullopt;
  return parse_number(key, text);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += items[i];
  }
  return out;
}

struct Field {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

Field real_field(std::string name, double RunConfig::*member) {
  return Field{name,
               [member, name](RunConfig& c, std::string_view v) {
                 c.*member = parse_number(name, v);
               },
               [member](const RunConfig& c) { return format_double(c.*member); }};
}

Field int_field(std::string name, int RunConfig::*member) {
  return Field{name,
               [member, name](RunConfig& c, std::string_view v) {
                 c.*member = parse_int<int>(name, v);
               },
               [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field auto_real_field(std::string name, std::optional<double> RunConfig::*member) {
  return Field{name,
               [member, name](RunConfig& c, std::string_view v) {
                 c.*member = parse_auto_double(name, v);
               },
               [member](const RunConfig& c) {
                 return (c.*member) ? format_double(*(c.*member)) : std::string("auto");
               }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"benchmark",
                 [](RunConfig& c, std::string_view v) { c.benchmark = std::string(trim(v)); },
                 [](const RunConfig& c) { return c.benchmark; }});
    f.push_back(real_field("mu", &RunConfig::mu));
    f.push_back({"d",
                 [](RunConfig& c, std::string_view v) {
                   if (trim(v) == "auto") {
                     c.d.reset();
                   } else {
                     c.d = parse_int<int>("d", v);
                   }
                 },
                 [](const RunConfig& c) {
                   return c.d ? std::to_string(*c.d) : std::string("auto");
                 }});
    f.push_back({"poles",
                 [](RunConfig& c, std::string_view v) {
                   c.poles.clear();
                   if (trim(v) == "default" || trim(v).empty()) return;
                   for (auto item : split(v, ',')) {
                     try {
                       c.poles.push_back(parse_complex(item));
                     } catch (const ConfigError&) {
                       bad_value("poles", v);
                     }
                   }
                 },
                 [](const RunConfig& c) {
                   if (c.poles.empty()) return std::string("default");
                   std::vector<std::string> items;
                   for (const Complex& p : c.poles) items.push_back(format_complex(p));
                   return join(items);
                 }});
    f.push_back(auto_real_field("kappa", &RunConfig::kappa));
    f.push_back(auto_real_field("k", &RunConfig::k));
    f.push_back({"linear_baseline",
                 [](RunConfig& c, std::string_view v) {
                   c.linear_baseline = parse_bool("linear_baseline", v);
                 },
                 [](const RunConfig& c) {
                   return std::string(c.linear_baseline ? "true" : "false");
                 }});
    f.push_back({"experiments",
                 [](RunConfig& c, std::string_view v) {
                   c.experiments.clear();
                   const auto& known = RunConfig::experiment_names();
                   for (auto item : split(v, ',')) {
                     if (item.empty()) continue;
                     if (std::find(known.begin(), known.end(), item) == known.end()) {
                       bad_value("experiments", item);
                     }
                     c.experiments.emplace_back(item);
                   }
                 },
                 [](const RunConfig& c) { return join(c.experiments); }});
    f.push_back(real_field("epsilon", &RunConfig::epsilon));
    f.push_back(real_field("epsilon_asym", &RunConfig::epsilon_asym));
    f.push_back(real_field("epsilon_fail", &RunConfig::epsilon_fail));
    f.push_back(real_field("horizon", &RunConfig::horizon));
    f.push_back(real_field("tail_begin", &RunConfig::tail_begin));
    f.push_back({"integrator",
                 [](RunConfig& c, std::string_view v) {
                   try {
                     c.integrator = parse_method(trim(v));
                   } catch (const ConfigError&) {
                     bad_value("integrator", v);
                   }
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.integrator)); }});
    f.push_back(real_field("step", &RunConfig::step));
    f.push_back(real_field("rtol", &RunConfig::rtol));
    f.push_back(real_field("atol", &RunConfig::atol));
    f.push_back(real_field("output_dt", &RunConfig::output_dt));
    f.push_back(int_field("runs", &RunConfig::runs));
    f.push_back({"seed",
                 [](RunConfig& c, std::string_view v) {
                   c.seed = parse_int<std::uint64_t>("seed", v);
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    f.push_back(int_field("attractor_samples", &RunConfig::attractor_samples));
    f.push_back(real_field("transient_time", &RunConfig::transient_time));
    f.push_back(real_field("sample_time", &RunConfig::sample_time));
    f.push_back(real_field("inflation", &RunConfig::inflation));
    f.push_back(real_field("alpha_min", &RunConfig::alpha_min));
    f.push_back(real_field("kappa_max", &RunConfig::kappa_max));
    f.push_back(real_field("lemma1_horizon", &RunConfig::lemma1_horizon));
    f.push_back({"output_dir",
                 [](RunConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
                 [](const RunConfig& c) { return c.output_dir; }});
    f.push_back(int_field("csv_runs", &RunConfig::csv_runs));
    f.push_back(real_field("csv_distance_dt", &RunConfig::csv_distance_dt));
    return f;
  }();
  return table;
}

const Field& field(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.name == key) return f;
  }
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

} // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  std::string out = format_double(c.real());
  if (!std::signbit(c.imag())) out += '+';
  out += format_double(c.imag());
  out += 'i';
  return out;
}

Complex parse_complex(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty complex number");
  if (text.back() != 'i') return Complex(parse_double(text), 0.0);
  const std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  for (std::size_t pos = body.size(); pos-- > 1;) {
    const char ch = body[pos];
    if ((ch == '+' || ch == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
      const std::string_view im = body.substr(pos);
      double imag = 0.0;
      if (im == "+" || im == "-") {
        imag = im == "+" ? 1.0 : -1.0;
      } else {
        imag = parse_double(im);
      }
      return Complex(parse_double(body.substr(0, pos)), imag);
    }
  }
  throw ConfigError("complex numbers need a real part: '" + std::string(text) + "'");
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto item : split(text, ',')) out.push_back(parse_double(item));
  return out;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  field(trim(key)).set(*this, value);
}

std::string RunConfig::get(std::string_view key) const { return field(key).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Field& f : fields()) out.push_back(f.name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& RunConfig::experiment_names() {
  static const std::vector<std::string> names{"verify", "invariance", "lemma1", "lemma2",
                                              "regulation"};
  return names;
}

RunConfig RunConfig::parse(std::string_view text, RunConfig base) {
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig RunConfig::load(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), std::move(base));
}

RunConfig RunConfig::parse(std::string_view text) { return parse(text, RunConfig{}); }

RunConfig RunConfig::load(const std::string& path) { return load(path, RunConfig{}); }

std::string RunConfig::serialize() const {
  std::string out;
  for (const Field& f : fields()) {
    out += f.name;
    out += " = ";
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

void RunConfig::validate() const {
  if (d && *d < 1) throw ConfigError("d must be positive");
  if (!(mu > 0.0 && mu <= 2.0)) throw ConfigError("mu must lie in (0, 2]");
  if (kappa && !(*kappa > 1.0)) throw ConfigError("kappa must be greater than 1");
  if (k && !(*k > 0.0)) throw ConfigError("k must be positive");
  if (!(epsilon > 0.0) || !(epsilon_asym > 0.0) || !(epsilon_fail > 0.0)) {
    throw ConfigError("thresholds must be positive");
  }
  if (!(horizon > 0.0) || !(tail_begin >= 0.0) || !(tail_begin < horizon)) {
    throw ConfigError("need 0 <= tail_begin < horizon");
  }
  if (!(step > 0.0) || !(rtol > 0.0) || !(atol > 0.0) || !(output_dt > 0.0)) {
    throw ConfigError("integrator settings must be positive");
  }
  if (runs < 1 || attractor_samples < 1) throw ConfigError("sample counts must be positive");
  if (!(transient_time >= 0.0) || !(sample_time >= 0.0)) {
    throw ConfigError("attractor horizons must be nonnegative");
  }
  if (!(inflation > 0.0)) throw ConfigError("inflation must be positive");
  if (!(kappa_max > 1.0)) throw ConfigError("kappa_max must exceed 1");
  if (!(lemma1_horizon > 0.0)) throw ConfigError("lemma1_horizon must be positive");
  if (csv_runs < 0) throw ConfigError("csv_runs must be nonnegative");
  if (!(csv_distance_dt > 0.0)) throw ConfigError("csv_distance_dt must be positive");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (experiments.empty()) throw ConfigError("no experiments requested");
}

bool RunConfig::wants(std::string_view experiment) const {
  return std::find(experiments.begin(), experiments.end(), experiment) != experiments.end();
}

} // namespace nlreg::cli
