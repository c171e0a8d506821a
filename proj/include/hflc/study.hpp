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


// Training-set-size sweep and CSV exports of its results.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <future>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hflc/anfis.hpp"
#include "hflc/biped.hpp"
#include "hflc/error.hpp"
#include "hflc/fuzzy.hpp"
#include "hflc/hierarchy.hpp"

namespace hflc {

struct SweepConfig {
  std::vector<int> sizes{10, 30, 40, 60, 120};
  int test_size = 200;
  std::uint64_t base_seed = 1;
  TrainConfig train_config;
  GaitSpec gait;
  BipedParams params;
  bool parallel = true;

  std::uint64_t train_seed(int size) const { return base_seed + static_cast<std::uint64_t>(size); }
  // Sizes are >= 2, so base_seed - 1 never collides with a training seed.
  std::uint64_t test_seed() const { return base_seed - 1; }

  void validate() const {
    if (sizes.empty()) throw InvalidArgument("sweep needs at least one size");
    for (int s : sizes) {
      if (s < 2) throw InvalidArgument("sweep sizes must be >= 2");
      if (train_seed(s) == test_seed()) throw InvalidArgument("train and test seeds collide");
    }
    if (test_size < 2) throw InvalidArgument("test_size must be >= 2");
    train_config.validate();
    gait.validate();
    params.validate();
  }
};

struct SweepKey {
  std::string controller;
  int output = 0;
  int size = 0;

  friend auto operator<=>(const SweepKey& a, const SweepKey& b) {
    return std::tie(a.controller, a.output, a.size) <=> std::tie(b.controller, b.output, b.size);
  }
  friend bool operator==(const SweepKey&, const SweepKey&) = default;
};

struct SweepEntry {
  double cumulative_se = 0.0;
  double rmse = 0.0;
  double train_se = 0.0;
  friend bool operator==(const SweepEntry&, const SweepEntry&) = default;
};

struct SweepResult {
  std::map<SweepKey, SweepEntry> entries;
  std::map<int, Hierarchy> models;  // trained hierarchy per training size
  std::uint64_t test_seed = 0;
  std::map<int, std::uint64_t> train_seeds;
  SweepConfig config;
  std::string timestamp;  // informational only; never exported
};

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

// Scores every model of a hierarchy on a (projected) test set.
inline std::map<SweepKey, SweepEntry> score_hierarchy(const Hierarchy& h,
                                                      const std::vector<GaitSample>& test, int size) {
  std::map<SweepKey, SweepEntry> out;
  for (const HflcNode& n : h.nodes) {
    for (std::size_t o = 0; o < n.models.size(); ++o) {
      const Evaluation ev = evaluate(n.models[o].fis, project_dataset(test, n.spec, o));
      out[{n.spec.id, static_cast<int>(o), size}] = {ev.cumulative_se, ev.rmse, n.models[o].train_se};
    }
  }
  return out;
}

inline SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult res;
  res.config = config;
  res.timestamp = detail::utc_timestamp();
  res.test_seed = config.test_seed();
  const std::vector<GaitSample> test =
      with_context("test set", [&] {
        return generate_dataset(config.params, config.gait, config.test_size, res.test_seed);
      });

  const auto run_size = [&config, &test](int size) {
    return with_context("size " + std::to_string(size), [&] {
      const std::vector<GaitSample> train =
          generate_dataset(config.params, config.gait, size, config.train_seed(size));
      TrainConfig tc = config.train_config;
      tc.seed = config.train_seed(size);
      return train_hierarchy(train, tc, config.params);
    });
  };

  // Each size is an independent job; results are merged in size order so
  // the outcome does not depend on scheduling.
  std::map<int, Hierarchy> trained;
  if (config.parallel) {
    std::vector<std::pair<int, std::future<Hierarchy>>> jobs;
    for (int s : config.sizes) {
      if (trained.contains(s)) continue;
      trained[s];
      jobs.emplace_back(s, std::async(std::launch::async, run_size, s));
    }
    for (auto& [s, f] : jobs) trained[s] = f.get();
  } else {
    for (int s : config.sizes) {
      if (!trained.contains(s)) trained[s] = run_size(s);
    }
  }

  for (auto& [size, h] : trained) {
    res.train_seeds[size] = config.train_seed(size);
    res.entries.merge(score_hierarchy(h, test, size));
    res.models.emplace(size, std::move(h));
  }
  return res;
}

namespace detail {

inline std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kErrorTableHeader = "controller,output,size,cumulative_se,rmse,train_se";

inline std::string export_error_table(const std::map<SweepKey, SweepEntry>& entries) {
  if (entries.empty()) throw InvalidArgument("export_error_table: no entries");
  std::string out = std::string(kErrorTableHeader) + "\n";
  for (const auto& [k, e] : entries) {
    out += k.controller + "," + std::to_string(k.output) + "," + std::to_string(k.size) + "," +
           detail::format_double("%.12g", e.cumulative_se) + "," +
           detail::format_double("%.12g", e.rmse) + "," +
           detail::format_double("%.12g", e.train_se) + "\n";
  }
  return out;
}

inline std::string export_error_table(const SweepResult& result) {
  return export_error_table(result.entries);
}

inline std::string export_surface(const TsFis& fis, std::size_t axis_i, std::size_t axis_j,
                                  std::span<const double> fixed, std::size_t resolution) {
  const std::vector<SurfacePoint> grid = response_surface(fis, axis_i, axis_j, fixed, resolution);
  std::string out = "xi,xj,y\n";
  for (const SurfacePoint& p : grid) {
    out += detail::format_double("%.17g", p.xi) + "," + detail::format_double("%.17g", p.xj) + "," +
           detail::format_double("%.17g", p.y) + "\n";
  }
  return out;
}

}  // namespace hflc
