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


#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hflc/study.hpp"

namespace hflc {
namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

class DefaultSweep : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { result_ = new SweepResult(run_sweep(SweepConfig{})); }
  static void TearDownTestSuite() { delete result_; }
  static SweepResult* result_;
};

SweepResult* DefaultSweep::result_ = nullptr;

TEST_F(DefaultSweep, EntryCompleteness) {
  EXPECT_EQ(result_->entries.size(), 40u);
  for (int size : {10, 30, 40, 60, 120}) {
    for (const char* id : {"HFLC1", "HFLC2", "HFLC5", "HFLC6"}) {
      EXPECT_TRUE(result_->entries.contains({id, 0, size}));
    }
    for (const char* id : {"HFLC3", "HFLC4"}) {
      EXPECT_TRUE(result_->entries.contains({id, 0, size}));
      EXPECT_TRUE(result_->entries.contains({id, 1, size}));
    }
  }
  for (const auto& [k, e] : result_->entries) {
    EXPECT_TRUE(std::isfinite(e.cumulative_se) && e.cumulative_se >= 0.0);
    EXPECT_TRUE(std::isfinite(e.rmse) && e.rmse >= 0.0);
    EXPECT_TRUE(std::isfinite(e.train_se) && e.train_se >= 0.0);
  }
  EXPECT_EQ(result_->models.size(), 5u);
}

TEST_F(DefaultSweep, SeedsAreSeparated) {
  for (const auto& [size, seed] : result_->train_seeds) {
    EXPECT_NE(seed, result_->test_seed);
    EXPECT_EQ(seed, result_->config.base_seed + static_cast<std::uint64_t>(size));
  }
}

TEST_F(DefaultSweep, ThirtyBeatsTen) {
  for (const char* id : {"HFLC1", "HFLC3", "HFLC5"}) {
    const int outputs = std::string(id) == "HFLC3" ? 2 : 1;
    for (int o = 0; o < outputs; ++o) {
      EXPECT_LE(result_->entries.at({id, o, 30}).cumulative_se,
                result_->entries.at({id, o, 10}).cumulative_se)
          << id;
    }
  }
}

TEST_F(DefaultSweep, DeterministicAndScheduleInvariant) {
  SweepConfig cfg;
  cfg.parallel = false;
  const SweepResult seq = run_sweep(cfg);
  EXPECT_EQ(seq.entries, result_->entries);
  EXPECT_EQ(export_error_table(seq), export_error_table(*result_));
}

TEST_F(DefaultSweep, ErrorTableFormat) {
  const std::string csv = export_error_table(*result_);
  const std::vector<std::string> lines = split_lines(csv);
  ASSERT_EQ(lines.size(), 41u);
  EXPECT_EQ(lines[0], "controller,output,size,cumulative_se,rmse,train_se");
  EXPECT_EQ(csv, export_error_table(*result_));
  EXPECT_EQ(split_csv(lines[1])[0], "HFLC1");
  EXPECT_EQ(split_csv(lines[1])[2], "10");
  EXPECT_EQ(split_csv(lines[5])[2], "120");
  EXPECT_EQ(split_csv(lines.back())[0], "HFLC6");

  // read back
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> cells = split_csv(lines[i]);
    ASSERT_EQ(cells.size(), 6u);
    const SweepKey key{cells[0], std::stoi(cells[1]), std::stoi(cells[2])};
    const SweepEntry& e = result_->entries.at(key);
    const double parsed[] = {std::strtod(cells[3].c_str(), nullptr), std::strtod(cells[4].c_str(), nullptr),
                             std::strtod(cells[5].c_str(), nullptr)};
    const double truth[] = {e.cumulative_se, e.rmse, e.train_se};
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(parsed[c], truth[c], 1e-11 * std::abs(truth[c]) + 1e-300);
  }
}

TEST(Sweep, SingleSize) {
  SweepConfig cfg;
  cfg.sizes = {30};
  const SweepResult r = run_sweep(cfg);
  EXPECT_EQ(r.entries.size(), 8u);
  EXPECT_EQ(split_lines(export_error_table(r)).size(), 9u);
}

TEST(Sweep, ConfigValidation) {
  SweepConfig cfg;
  cfg.sizes = {};
  EXPECT_THROW(run_sweep(cfg), InvalidArgument);
  cfg.sizes = {1};
  EXPECT_THROW(run_sweep(cfg), InvalidArgument);
  cfg.sizes = {10};
  cfg.test_size = 1;
  EXPECT_THROW(run_sweep(cfg), InvalidArgument);
  EXPECT_THROW(export_error_table(std::map<SweepKey, SweepEntry>{}), InvalidArgument);
}

TEST(Sweep, GenerationErrorsCarryContext) {
  SweepConfig cfg;
  cfg.gait.com_height = 1.5;
  try {
    run_sweep(cfg);
    FAIL();
  } catch (const Unreachable& e) {
    EXPECT_NE(std::string(e.what()).find("test set"), std::string::npos);
  }
}

TEST(ExportSurface, Format) {
  TsFis fis;
  fis.inputs = {{"a", 0, 1, {{0, 0.5}, {1, 0.5}}}, {"b", 2, 3, {{2, 0.5}, {3, 0.5}}}};
  fis = grid_partition(fis.inputs);
  for (Rule& r : fis.rules) r.consequent = {1.5, 0, 0};
  const std::vector<double> base{0.5, 2.5};
  const std::vector<std::string> lines = split_lines(export_surface(fis, 0, 1, base, 2));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "xi,xj,y");
  EXPECT_EQ(lines[1].rfind("0,2,", 0), 0u);
  EXPECT_EQ(lines[4].rfind("1,3,", 0), 0u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    EXPECT_NEAR(std::stod(lines[i].substr(lines[i].rfind(',') + 1)), 1.5, 1e-15);
  }
}

TEST(ExportSurface, RowsMatchDirectEvaluation) {
  TsFis fis;
  fis.inputs = {{"a", -1, 1, {{-1, 0.7}, {0, 0.7}, {1, 0.7}}}, {"b", 0, 2, {{0, 1}, {2, 1}}},
                {"c", 0, 1, {{0, 1}, {1, 1}}}};
  fis = grid_partition(fis.inputs);
  double v = 0.1;
  for (Rule& r : fis.rules) {
    for (double& p : r.consequent) {
      v += 0.37;
      p = v - std::floor(v);
    }
  }
  const std::vector<double> base{0.0, 0.0, 0.25};
  const std::vector<std::string> lines = split_lines(export_surface(fis, 1, 0, base, 9));
  ASSERT_EQ(lines.size(), 82u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> c = split_csv(lines[i]);
    std::vector<double> x = base;
    x[1] = std::strtod(c[0].c_str(), nullptr);
    x[0] = std::strtod(c[1].c_str(), nullptr);
    EXPECT_EQ(std::strtod(c[2].c_str(), nullptr), eval_fis(fis, x));
  }
}

}  // namespace
}  // namespace hflc
