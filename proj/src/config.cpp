// Copyright 2026 The signopt Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "signopt/errors.hpp"
#include "signopt/harness.hpp"

namespace signopt {
namespace {

namespace pt = boost::property_tree;

const char* const kObjectives[] = {"quadratic1d", "half_square", "example1",
                                   "quadratic2d", "toy",         "logistic"};

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw ParseError(0, "config: bad value '" + value + "' for " + key);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) bad_value(key, v);
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) bad_value(key, v);
  try {
    return std::stoull(v);
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v);
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  /// nullopt: omit from serialized output (unset optional).
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

template <class T>
Field str_field(const char* s, const char* k, T ExperimentConfig::*m) {
  return {s, k, [m](ExperimentConfig& c, const std::string& v) { c.*m = v; },
          [m](const ExperimentConfig& c) { return std::optional<std::string>(c.*m); }};
}

Field double_field(const char* s, const char* k, double ExperimentConfig::*m) {
  const std::string name = std::string(s) + "." + k;
  return {s, k, [m, name](ExperimentConfig& c, const std::string& v) { c.*m = to_double(name, v); },
          [m](const ExperimentConfig& c) { return std::optional(format_double(c.*m)); }};
}

Field opt_double_field(const char* s, const char* k, std::optional<double> ExperimentConfig::*m) {
  const std::string name = std::string(s) + "." + k;
  return {s, k, [m, name](ExperimentConfig& c, const std::string& v) { c.*m = to_double(name, v); },
          [m](const ExperimentConfig& c) {
            return (c.*m) ? std::optional(format_double(*(c.*m))) : std::nullopt;
          }};
}

template <class T>
Field uint_field(const char* s, const char* k, T ExperimentConfig::*m) {
  const std::string name = std::string(s) + "." + k;
  return {s, k,
          [m, name](ExperimentConfig& c, const std::string& v) { c.*m = static_cast<T>(to_uint(name, v)); },
          [m](const ExperimentConfig& c) { return std::optional(std::to_string(c.*m)); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      str_field("objective", "name", &ExperimentConfig::objective),
      uint_field("objective", "n", &ExperimentConfig::n),
      uint_field("objective", "d", &ExperimentConfig::d),
      uint_field("objective", "data_seed", &ExperimentConfig::data_seed),
      opt_double_field("objective", "mu", &ExperimentConfig::mu),
      opt_double_field("objective", "L", &ExperimentConfig::L),
      {"method", "names",
       [](ExperimentConfig& c, const std::string& v) { c.methods = split_list(v); },
       [](const ExperimentConfig& c) { return std::optional(join(c.methods)); }},
      uint_field("method", "iters", &ExperimentConfig::iters),
      uint_field("method", "repeats", &ExperimentConfig::repeats),
      uint_field("method", "seed", &ExperimentConfig::seed),
      str_field("method", "x0", &ExperimentConfig::x0),
      double_field("method", "beta_m", &ExperimentConfig::beta_m),
      str_field("method", "ef_mode", &ExperimentConfig::ef_mode),
      str_field("method", "theorem", &ExperimentConfig::theorem),
      str_field("schedule", "kind", &ExperimentConfig::schedule),
      double_field("schedule", "alpha", &ExperimentConfig::alpha),
      opt_double_field("schedule", "dimin_const", &ExperimentConfig::dimin_const),
      str_field("oracle", "kind", &ExperimentConfig::oracle),
      double_field("oracle", "noise_std", &ExperimentConfig::noise_std),
      uint_field("oracle", "batch", &ExperimentConfig::batch),
      opt_double_field("oracle", "sigma", &ExperimentConfig::sigma),
      double_field("oracle", "p_min", &ExperimentConfig::p_min),
      {"distributed", "workers",
       [](ExperimentConfig& c, const std::string& v) {
         c.workers.clear();
         for (const std::string& w : split_list(v)) c.workers.push_back(to_uint("distributed.workers", w));
       },
       [](const ExperimentConfig& c) {
         std::vector<std::string> items;
         for (std::size_t w : c.workers) items.push_back(std::to_string(w));
         return std::optional(join(items));
       }},
      str_field("output", "path", &ExperimentConfig::path),
      {"output", "iterates",
       [](ExperimentConfig& c, const std::string& v) { c.iterates = to_bool("output.iterates", v); },
       [](const ExperimentConfig& c) { return std::optional<std::string>(c.iterates ? "true" : "false"); }},
      uint_field("output", "stride", &ExperimentConfig::stride),
  };
  return kFields;
}

[[noreturn]] void invalid(const std::string& what) { fail(ErrorKind::kInvalidConfig, "config: " + what); }

}  // namespace

void ExperimentConfig::validate() const {
  if (std::find(std::begin(kObjectives), std::end(kObjectives), objective) == std::end(kObjectives)) {
    invalid("unknown objective '" + objective + "'");
  }
  if (n == 0 || d == 0) invalid("objective.n and objective.d must be >= 1");
  if (mu && !(*mu > 0.0)) invalid("objective.mu must be > 0");
  if (L && !(*L > 0.0)) invalid("objective.L must be > 0");
  if (methods.empty()) invalid("method.names is empty");
  for (const std::string& m : methods) parse_method_spec(m, *this);
  if (iters == 0) invalid("method.iters must be >= 1");
  if (repeats == 0) invalid("method.repeats must be >= 1");
  if (!(beta_m >= 0.0 && beta_m < 1.0)) invalid("method.beta_m must lie in [0, 1)");
  if (ef_mode != "at-x" && ef_mode != "at-x-minus-e") invalid("method.ef_mode must be at-x or at-x-minus-e");
  if (!parse_theorem(theorem)) invalid("unknown theorem '" + theorem + "'");
  if (schedule != "constant" && schedule != "diminishing") {
    invalid("schedule.kind must be constant or diminishing");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) invalid("schedule.alpha must be > 0");
  if (dimin_const && !(*dimin_const > 0.0)) invalid("schedule.dimin_const must be > 0");
  if (!(p_min > 0.5 && p_min <= 1.0)) {
    invalid(schedule == "diminishing" ? "oracle.p_min must exceed 1/2 under a diminishing schedule"
                                      : "oracle.p_min must lie in (1/2, 1]");
  }
  if (oracle != "exact" && oracle != "gaussian" && oracle != "minibatch") {
    invalid("oracle.kind must be exact, gaussian or minibatch");
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) invalid("oracle.noise_std must be >= 0");
  if (batch == 0) invalid("oracle.batch must be >= 1");
  if (sigma && !(*sigma >= 0.0)) invalid("oracle.sigma must be >= 0");
  if (workers.empty()) invalid("distributed.workers is empty");
  for (std::size_t w : workers) {
    if (w == 0) invalid("distributed.workers entries must be >= 1");
  }
  if (stride == 0) invalid("output.stride must be >= 1");
  if (!path.empty()) {
    const std::filesystem::path parent = std::filesystem::absolute(path).parent_path();
    if (!std::filesystem::is_directory(parent)) invalid("output directory does not exist: " + parent.string());
  }
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  const char* current = "";
  for (const Field& f : fields()) {
    const auto value = f.get(*this);
    if (!value) continue;
    if (std::string_view(current) != f.section) {
      out << (*current ? "\n" : "") << '[' << f.section << "]\n";
      current = f.section;
    }
    out << f.key << " = " << *value << '\n';
  }
  return out.str();
}

std::string ExperimentConfig::fingerprint() const {
  std::string flat;
  for (const Field& f : fields()) {
    const auto value = f.get(*this);
    if (!value) continue;
    if (!flat.empty()) flat += ' ';
    flat += std::string(f.section) + "." + f.key + "=" + *value;
  }
  // 64-bit FNV-1a of the flat form.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : flat) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return flat + " fingerprint=" + hex;
}

ExperimentConfig load_config_string(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), "config parse error at line " + std::to_string(e.line()) + ": " +
                                   e.message());
  }

  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ParseError(0, "config: key outside any section: " + section);
    for (const auto& [key, value] : body) {
      const auto& all = fields();
      const auto it = std::find_if(all.begin(), all.end(), [&](const Field& f) {
        return section == f.section && key == f.key;
      });
      if (it == all.end()) throw ParseError(0, "config: unknown key " + section + "." + key);
      it->set(cfg, trim(value.data()));
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInvalidConfig, "config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return load_config_string(text.str());
}

std::vector<std::string> preset_names() {
  return {"quadratic1d", "ex1", "adagrad-v1", "adagrad-v2", "toy", "logistic", "distributed", "ode"};
}

std::optional<ExperimentConfig> preset(std::string_view name) {
  ExperimentConfig c;
  if (name == "quadratic1d") {
    c.objective = "quadratic1d";
    c.methods = {"scaled_signgd"};
    c.alpha = 0.25;
    c.iters = 40;
    c.x0 = "1";
    c.mu = 2.0;
    c.L = 2.0;
    c.theorem = "thm1";
  } else if (name == "ex1") {
    c.objective = "example1";
    c.methods = {"signgd"};
    c.alpha = 0.1;
    c.iters = 100;
    c.x0 = "0.05,0.05";
    c.iterates = true;
  } else if (name == "adagrad-v1") {
    c.objective = "half_square";
    c.methods = {"sign_adagrad_v1"};
    c.alpha = 0.5;
    c.iters = 100;
    c.x0 = "1";
    c.iterates = true;
  } else if (name == "adagrad-v2") {
    c.objective = "quadratic1d";
    c.methods = {"sign_adagrad_v2"};
    c.alpha = 1.0;
    c.iters = 50;
    c.x0 = "0.5";
    c.iterates = true;
  } else if (name == "toy") {
    c.objective = "toy";
    c.methods = {"gd", "signgd", "signum", "ef_signgd", "scaled_signgd"};
    c.alpha = 0.05;
    c.iters = 300;
    c.x0 = "3";
  } else if (name == "logistic") {
    c.objective = "logistic";
    c.n = 2000;
    c.d = 50;
    c.data_seed = 1;
    c.oracle = "minibatch";
    c.batch = 32;
    c.methods = {"sgd@0.05", "scaled_signsgd@0.001", "ef_signsgd@0.03", "signsgd@0.003",
                 "signum@0.002"};
    c.alpha = 0.001;
    c.dimin_const = 0.1;
    c.iters = 2000;
    c.repeats = 20;
    c.seed = 100;
    c.x0 = "gaussian";
    c.p_min = 0.9;
    c.stride = 10;
  } else if (name == "distributed") {
    c.objective = "logistic";
    c.n = 2000;
    c.d = 50;
    c.data_seed = 1;
    c.oracle = "minibatch";
    c.batch = 32;
    c.methods = {"scaled_signsgd"};
    c.alpha = 0.001;
    c.iters = 1000;
    c.repeats = 10;
    c.seed = 200;
    c.x0 = "gaussian";
    c.workers = {1, 3, 5};
    c.stride = 10;
  } else if (name == "ode") {
    c.objective = "quadratic1d";
    c.x0 = "1";
  } else {
    return std::nullopt;
  }
  return c;
}

}  // namespace signopt
