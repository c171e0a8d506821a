// Copyright 2026 The hflc Authors
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


// File formats: gait dataset CSV, the JSON model file and the key = value
// run configuration.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "hflc/anfis.hpp"
#include "hflc/biped.hpp"
#include "hflc/error.hpp"
#include "hflc/fuzzy.hpp"
#include "hflc/hierarchy.hpp"
#include "hflc/study.hpp"

namespace hflc::io {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out = split(text, '\n');
  for (auto& l : out) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& value) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gait dataset CSV

inline constexpr std::string_view kGaitCsvHeader =
    "t,x0,y0,beta_left,gamma_left,xcl,ycl,beta_right,gamma_right,xcr,ycr";

inline std::string write_gait_csv(const std::vector<GaitSample>& samples) {
  std::string out(kGaitCsvHeader);
  out += '\n';
  for (const GaitSample& s : samples) {
    const double row[] = {s.t,          s.com.x,         s.com.y,         s.beta_left,
                          s.gamma_left, s.ankle_left.x,  s.ankle_left.y,  s.beta_right,
                          s.gamma_right, s.ankle_right.x, s.ankle_right.y};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) out += ',';
      out += detail::fmt17(row[i]);
    }
    out += '\n';
  }
  return out;
}

// Columns are matched by header name and may appear in any order; extra
// columns are ignored. Errors name the offending row and column.
inline std::vector<GaitSample> read_gait_csv(std::string_view text) {
  const std::vector<std::string_view> ls = detail::lines(text);
  if (ls.empty() || detail::trim(ls.front()).empty()) throw ParseError("dataset CSV has no header");
  const std::vector<std::string_view> header = detail::split(ls.front(), ',');
  const std::vector<std::string_view> wanted = detail::split(kGaitCsvHeader, ',');
  std::vector<std::size_t> col(wanted.size());
  for (std::size_t w = 0; w < wanted.size(); ++w) {
    bool found = false;
    for (std::size_t h = 0; h < header.size(); ++h) {
      if (detail::trim(header[h]) == wanted[w]) {
        col[w] = h;
        found = true;
        break;
      }
    }
    if (!found) throw ParseError("dataset CSV is missing column '" + std::string(wanted[w]) + "'");
  }

  std::vector<GaitSample> out;
  for (std::size_t r = 1; r < ls.size(); ++r) {
    if (detail::trim(ls[r]).empty()) continue;
    const std::vector<std::string_view> cells = detail::split(ls[r], ',');
    double v[11];
    for (std::size_t w = 0; w < wanted.size(); ++w) {
      const std::string where = "dataset CSV row " + std::to_string(r + 1) + " column '" +
                                std::string(wanted[w]) + "'";
      if (col[w] >= cells.size()) throw ParseError(where + ": missing value");
      if (!detail::parse_number(cells[col[w]], v[w]) || !std::isfinite(v[w])) {
        throw ParseError(where + ": not a finite number");
      }
    }
    GaitSample s;
    s.t = v[0];
    s.com = {v[1], v[2]};
    s.beta_left = v[3];
    s.gamma_left = v[4];
    s.ankle_left = {v[5], v[6]};
    s.beta_right = v[7];
    s.gamma_right = v[8];
    s.ankle_right = {v[9], v[10]};
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model file

inline constexpr int kModelSchemaVersion = 1;

using Json = nlohmann::ordered_json;

inline Json fis_to_json(const TsFis& fis) {
  Json j;
  j["output_name"] = fis.output_name;
  Json inputs = Json::array();
  for (const InputSpec& in : fis.inputs) {
    Json mfs = Json::array();
    for (const GaussianMf& mf : in.mfs) mfs.push_back({{"center", mf.center}, {"sigma", mf.sigma}});
    inputs.push_back({{"name", in.name}, {"lo", in.lo}, {"hi", in.hi}, {"mfs", std::move(mfs)}});
  }
  j["inputs"] = std::move(inputs);
  Json rules = Json::array();
  for (const Rule& r : fis.rules) {
    rules.push_back({{"antecedent", r.antecedent}, {"consequent", r.consequent}});
  }
  j["rules"] = std::move(rules);
  return j;
}

inline TsFis fis_from_json(const Json& j) {
  TsFis fis;
  fis.output_name = j.at("output_name").get<std::string>();
  for (const Json& ji : j.at("inputs")) {
    InputSpec in;
    in.name = ji.at("name").get<std::string>();
    in.lo = ji.at("lo").get<double>();
    in.hi = ji.at("hi").get<double>();
    for (const Json& jm : ji.at("mfs")) {
      in.mfs.push_back({jm.at("center").get<double>(), jm.at("sigma").get<double>()});
    }
    fis.inputs.push_back(std::move(in));
  }
  for (const Json& jr : j.at("rules")) {
    fis.rules.push_back({jr.at("antecedent").get<std::vector<std::size_t>>(),
                         jr.at("consequent").get<std::vector<double>>()});
  }
  fis.validate();
  return fis;
}

inline Json train_config_to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"learn_rate", c.learn_rate},
          {"ridge_lambda", c.ridge_lambda},
          {"mfs_per_input", c.mfs_per_input},
          {"seed", c.seed}};
}

inline TrainConfig train_config_from_json(const Json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<int>();
  c.learn_rate = j.at("learn_rate").get<double>();
  c.ridge_lambda = j.at("ridge_lambda").get<double>();
  c.mfs_per_input = j.at("mfs_per_input").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

inline Json hierarchy_to_json(const Hierarchy& h) {
  Json j;
  j["schema_version"] = kModelSchemaVersion;
  j["params"] = {{"l_thigh", h.params.l_thigh}, {"l_shank", h.params.l_shank}};
  j["train_config"] = train_config_to_json(h.config);
  Json ctrls = Json::array();
  for (const HflcNode& n : h.nodes) {
    Json models = Json::array();
    for (std::size_t o = 0; o < n.models.size(); ++o) {
      const TrainedModel& m = n.models[o];
      models.push_back({{"output", n.spec.output_signals[o]},
                        {"seed", m.seed},
                        {"train_se", m.train_se},
                        {"train_rmse", m.train_rmse},
                        {"epochs_run", m.epochs_run},
                        {"fis", fis_to_json(m.fis)}});
    }
    ctrls.push_back({{"id", n.spec.id},
                     {"leg", std::string(to_string(n.spec.leg))},
                     {"inputs", n.spec.input_signals},
                     {"outputs", n.spec.output_signals},
                     {"models", std::move(models)}});
  }
  j["controllers"] = std::move(ctrls);
  Json ph = Json::array();
  for (const ControllerSpec& s : placeholder_specs()) ph.push_back(s.id);
  j["placeholders"] = std::move(ph);
  return j;
}

inline Hierarchy hierarchy_from_json(const Json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw ParseError("unsupported model schema_version " + std::to_string(version));
    }
    Hierarchy h;
    h.params.l_thigh = j.at("params").at("l_thigh").get<double>();
    h.params.l_shank = j.at("params").at("l_shank").get<double>();
    h.params.validate();
    h.config = train_config_from_json(j.at("train_config"));
    for (const Json& jc : j.at("controllers")) {
      HflcNode n;
      n.spec.id = jc.at("id").get<std::string>();
      n.spec.leg = leg_from_string(jc.at("leg").get<std::string>());
      n.spec.input_signals = jc.at("inputs").get<std::vector<std::string>>();
      n.spec.output_signals = jc.at("outputs").get<std::vector<std::string>>();
      for (const Json& jm : jc.at("models")) {
        TrainedModel m;
        m.seed = jm.at("seed").get<std::uint64_t>();
        m.train_se = jm.at("train_se").get<double>();
        m.train_rmse = jm.at("train_rmse").get<double>();
        m.epochs_run = jm.at("epochs_run").get<int>();
        m.fis = fis_from_json(jm.at("fis"));
        n.models.push_back(std::move(m));
      }
      h.nodes.push_back(std::move(n));
    }
    if (h.nodes.empty()) throw ParseError("model file has no controllers");
    for (const char* id : {"HFLC1", "HFLC2", "HFLC3", "HFLC4", "HFLC5", "HFLC6"}) h.node(id);
    h.validate();
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid model file: ") + e.what());
  }
}

inline std::string dump_model(const Hierarchy& h) { return hierarchy_to_json(h).dump(1) + "\n"; }

inline Hierarchy parse_model(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  return hierarchy_from_json(j);
}

inline void save_model_file(const std::filesystem::path& path, const Hierarchy& h) {
  write_text_file(path, dump_model(h));
}

inline Hierarchy load_model_file(const std::filesystem::path& path) {
  return with_context(path.string(), [&] { return parse_model(read_text_file(path)); });
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  BipedParams params;
  GaitSpec gait;
  TrainConfig train;
  std::vector<int> sizes{10, 30, 40, 60, 120};
  int test_size = 200;
  std::uint64_t base_seed = 1;
  int max_iter = kDefaultChainMaxIter;
  double tol = kDefaultChainTol;

  SweepConfig sweep() const {
    SweepConfig s;
    s.sizes = sizes;
    s.test_size = test_size;
    s.base_seed = base_seed;
    s.train_config = train;
    s.gait = gait;
    s.params = params;
    return s;
  }

  void validate() const {
    params.validate();
    gait.validate();
    train.validate();
    sweep().validate();
    if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
    if (!(tol >= 0.0)) throw InvalidArgument("tol must be >= 0");
  }
};

inline std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  for (std::string_view part : detail::split(s, ',')) {
    int v = 0;
    if (!detail::parse_number(part, v)) {
      throw ParseError("'" + std::string(s) + "' is not a comma-separated integer list");
    }
    out.push_back(v);
  }
  return out;
}

// `key = value` lines; '#' starts a comment. Unknown keys are rejected.
inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  const auto real = [](double& dst) {
    return [&dst](std::string_view v) { return detail::parse_number(v, dst); };
  };
  const auto integer = [](int& dst) {
    return [&dst](std::string_view v) { return detail::parse_number(v, dst); };
  };
  const auto u64 = [](std::uint64_t& dst) {
    return [&dst](std::string_view v) { return detail::parse_number(v, dst); };
  };
  const std::map<std::string, std::function<bool(std::string_view)>, std::less<>> setters{
      {"l_thigh", real(c.params.l_thigh)},
      {"l_shank", real(c.params.l_shank)},
      {"step_length", real(c.gait.step_length)},
      {"step_height", real(c.gait.step_height)},
      {"com_height", real(c.gait.com_height)},
      {"com_bob", real(c.gait.com_bob)},
      {"phase_jitter", real(c.gait.phase_jitter)},
      {"n_samples", integer(c.gait.n_samples)},
      {"seed", u64(c.gait.seed)},
      {"epochs", integer(c.train.epochs)},
      {"learn_rate", real(c.train.learn_rate)},
      {"ridge_lambda", real(c.train.ridge_lambda)},
      {"mfs_per_input", integer(c.train.mfs_per_input)},
      {"train_seed", u64(c.train.seed)},
      {"sizes", [&c](std::string_view v) { c.sizes = parse_int_list(v); return true; }},
      {"test_size", integer(c.test_size)},
      {"base_seed", u64(c.base_seed)},
      {"max_iter", integer(c.max_iter)},
      {"tol", real(c.tol)},
  };

  const std::vector<std::string_view> ls = detail::lines(text);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    std::string_view line = ls[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(i + 1);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(where + ": expected key = value");
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError(where + ": unknown key '" + std::string(key) + "'");
    if (!it->second(value)) {
      throw ParseError(where + ": bad value '" + std::string(value) + "' for " + std::string(key));
    }
  }
  c.validate();
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  return with_context(path.string(), [&] { return parse_config(read_text_file(path)); });
}

}  // namespace hflc::io
