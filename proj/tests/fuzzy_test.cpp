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
#include <cstring>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hflc/fuzzy.hpp"
#include "oracle.hpp"

namespace hflc {
namespace {

TsFis single_input_fis(std::vector<GaussianMf> mfs, std::vector<std::vector<double>> consequents) {
  TsFis fis;
  fis.inputs.push_back({"x", -1.0, 2.0, mfs});
  for (std::size_t i = 0; i < consequents.size(); ++i) {
    fis.rules.push_back({{i}, consequents[i]});
  }
  fis.validate();
  return fis;
}

TEST(EvalMf, PeakAtCenter) {
  EXPECT_EQ(eval_mf({0.0, 1.0}, 0.0), 1.0);
  EXPECT_EQ(eval_mf({2.0, 0.5}, 2.0), 1.0);
}

TEST(EvalMf, OneSigmaAway) {
  // exp(-0.5)
  EXPECT_NEAR(eval_mf({0.0, 1.0}, 1.0), 0.6065306597126334, 1e-15);
}

TEST(EvalMf, StrictlyDecreasingInDistance) {
  const GaussianMf mf{0.3, 0.7};
  double prev = eval_mf(mf, 0.3);
  for (double d = 0.05; d < 4.0; d += 0.05) {
    const double right = eval_mf(mf, 0.3 + d);
    EXPECT_LT(right, prev);
    EXPECT_GT(right, 0.0);
    EXPECT_NEAR(right, eval_mf(mf, 0.3 - d), 1e-15);
    prev = right;
  }
}

TEST(EvalMf, RejectsBadArguments) {
  EXPECT_THROW(eval_mf({0.0, 0.0}, 1.0), InvalidArgument);
  EXPECT_THROW(eval_mf({0.0, -1.0}, 1.0), InvalidArgument);
  EXPECT_THROW(eval_mf({0.0, 1.0}, NAN), InvalidArgument);
  EXPECT_THROW(eval_mf({0.0, 1.0}, INFINITY), InvalidArgument);
}

TEST(FiringStrengths, Examples) {
  const TsFis one = single_input_fis({{0.0, 1.0}}, {{0.0, 0.0}});
  EXPECT_EQ(firing_strengths(one, std::vector{0.0}), std::vector{1.0});

  TsFis two;
  two.inputs = {{"a", -1, 1, {{0.0, 1.0}}}, {"b", -1, 1, {{0.0, 1.0}}}};
  two.rules = {{{0, 0}, {0, 0, 0}}};
  EXPECT_EQ(firing_strengths(two, std::vector{0.0, 0.0}), std::vector{1.0});
  // exp(-0.5)^2 = exp(-1)
  EXPECT_NEAR(firing_strengths(two, std::vector{1.0, 1.0})[0], 0.36787944117144233, 1e-15);
}

TEST(FiringStrengths, DimensionMismatch) {
  const TsFis one = single_input_fis({{0.0, 1.0}}, {{0.0, 0.0}});
  EXPECT_THROW(firing_strengths(one, std::vector{0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(eval_fis(one, std::vector<double>{}), InvalidArgument);
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(std::vector{0.2, 0.2}), (std::vector{0.5, 0.5}));
  EXPECT_EQ(normalize(std::vector{1.0, 0.0, 0.0}), (std::vector{1.0, 0.0, 0.0}));
  const std::vector<double> n = normalize(std::vector{0.3, 0.1, 0.6});
  EXPECT_NEAR(n[0], 0.3, 1e-15);
  EXPECT_NEAR(n[1], 0.1, 1e-15);
  EXPECT_NEAR(n[2], 0.6, 1e-15);
}

TEST(Normalize, DegenerateFiring) {
  EXPECT_THROW(normalize(std::vector{0.0, 0.0}), DegenerateFiring);
  EXPECT_THROW(normalize(std::vector<double>{1.0, std::nan("")}), DegenerateFiring);
  EXPECT_THROW(normalize(std::vector<double>{}), DegenerateFiring);
}

TEST(EvalFis, SingleRuleIsItsConsequent) {
  TsFis fis;
  fis.inputs = {{"a", 0, 1, {{0.5, 0.2}}}, {"b", 0, 1, {{0.5, 0.2}}}};
  fis.rules = {{{0, 0}, {1.0, 2.0, 3.0}}};
  EXPECT_EQ(eval_fis(fis, {1.0, 1.0}), 6.0);
}

TEST(EvalFis, SymmetricFiringGivesMidpoint) {
  const TsFis fis = single_input_fis({{0.0, 1.0}, {1.0, 1.0}}, {{0.0, 0.0}, {1.0, 0.0}});
  EXPECT_NEAR(eval_fis(fis, {0.5}), 0.5, 1e-15);
}

TEST(EvalFis, FarOutsideRangeStillEvaluates) {
  const TsFis fis = single_input_fis({{0.0, 0.01}, {1.0, 0.01}}, {{0.0, 0.0}, {1.0, 0.0}});
  // every plain firing strength underflows here
  EXPECT_THROW(normalize(firing_strengths(fis, std::vector{50.0})), DegenerateFiring);
  EXPECT_NEAR(eval_fis(fis, {50.0}), 1.0, 1e-12);
}

TEST(EvalFis, LogDomainMatchesPlainNormalization) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const TsFis fis = testing::random_fis(rng, 1 + trial % 3, 2 + trial % 2);
    const std::vector<double> x = testing::random_point(rng, fis, 0.2);
    const std::vector<double> a = normalize(firing_strengths(fis, x));
    const std::vector<double> b = normalized_firing(fis, x);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
  }
}

TEST(FuzzyProperties, NormalizationPositivityPurity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const TsFis fis = testing::random_fis(rng, 1 + trial % 4, 2 + trial % 3);
    const std::vector<double> x = testing::random_point(rng, fis, 0.5);
    const std::vector<double> w = firing_strengths(fis, x);
    for (double v : w) EXPECT_GT(v, 0.0);
    const std::vector<double> wb = normalize(w);
    EXPECT_NEAR(std::accumulate(wb.begin(), wb.end(), 0.0), 1.0, 1e-12);
    const double y1 = eval_fis(fis, x);
    const double y2 = eval_fis(fis, x);
    EXPECT_EQ(std::memcmp(&y1, &y2, sizeof y1), 0);
  }
}

TEST(FuzzyProperties, SharedConsequentCollapsesToLinear) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    TsFis fis = testing::random_fis(rng, 1 + trial % 4, 2 + trial % 2, false);
    std::vector<double> p(fis.input_count() + 1);
    for (double& c : p) c = std::uniform_real_distribution<double>(-3, 3)(rng);
    for (Rule& r : fis.rules) r.consequent = p;
    const std::vector<double> x = testing::random_point(rng, fis, 0.3);
    double expected = p[0];
    for (std::size_t k = 0; k < x.size(); ++k) expected += p[k + 1] * x[k];
    EXPECT_NEAR(eval_fis(fis, x), expected, 1e-12 * (1.0 + std::abs(expected)));
  }
}

TEST(GridPartition, RuleCounts) {
  const auto specs = [](std::size_t n, std::size_t m) {
    std::vector<InputSpec> v;
    for (std::size_t k = 0; k < n; ++k) {
      InputSpec in{"x" + std::to_string(k), 0.0, 1.0, {}};
      for (std::size_t j = 0; j < m; ++j) in.mfs.push_back({static_cast<double>(j), 0.5});
      v.push_back(in);
    }
    return v;
  };
  EXPECT_EQ(grid_partition(specs(2, 3)).rule_count(), 9u);
  EXPECT_EQ(grid_partition(specs(4, 2)).rule_count(), 16u);
  EXPECT_EQ(grid_partition(specs(1, 2)).rule_count(), 2u);
}

TEST(GridPartition, LexicographicAndZeroed) {
  std::vector<InputSpec> in{{"a", 0, 1, {{0, 1}, {1, 1}}}, {"b", 0, 1, {{0, 1}, {1, 1}, {2, 1}}}};
  const TsFis fis = grid_partition(in);
  ASSERT_EQ(fis.rule_count(), 6u);
  const std::vector<std::vector<std::size_t>> expected{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(fis.rules[i].antecedent, expected[i]);
    EXPECT_EQ(fis.rules[i].consequent, std::vector<double>(3, 0.0));
  }
}

TEST(GridPartition, RandomizedCounts) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<InputSpec> in;
    std::size_t product = 1;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t m = 2 + rng() % 3;
      product *= m;
      InputSpec s{"x", 0, 1, {}};
      for (std::size_t j = 0; j < m; ++j) s.mfs.push_back({static_cast<double>(j), 1.0});
      in.push_back(s);
    }
    EXPECT_EQ(grid_partition(in).rule_count(), product);
  }
}

TEST(GridPartition, Errors) {
  EXPECT_THROW(grid_partition({}), InvalidArgument);
  EXPECT_THROW(grid_partition({{"a", 0, 1, {{0, 1}}}}), InvalidArgument);
}

TEST(Validate, CatchesBrokenInvariants) {
  TsFis fis = single_input_fis({{0.0, 1.0}, {1.0, 1.0}}, {{0, 0}, {1, 0}});
  TsFis bad = fis;
  bad.rules[0].antecedent[0] = 2;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = fis;
  bad.rules[0].consequent.pop_back();
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = fis;
  bad.inputs[0].mfs[0].sigma = 0.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = fis;
  std::swap(bad.inputs[0].mfs[0], bad.inputs[0].mfs[1]);
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = fis;
  bad.inputs[0].hi = bad.inputs[0].lo;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(ResponseSurface, CornersAtResolutionTwo) {
  TsFis fis;
  fis.inputs = {{"a", 0, 2, {{0, 1}, {2, 1}}}, {"b", -1, 1, {{-1, 1}, {1, 1}}}, {"c", 0, 1, {{0, 1}, {1, 1}}}};
  fis = grid_partition(fis.inputs);
  const std::vector<SurfacePoint> g = response_surface(fis, 0, 1, std::vector{0.0, 0.0, 0.5}, 2);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[0].xi, 0.0);
  EXPECT_EQ(g[0].xj, -1.0);
  EXPECT_EQ(g[1].xi, 2.0);
  EXPECT_EQ(g[1].xj, -1.0);
  EXPECT_EQ(g[2].xi, 0.0);
  EXPECT_EQ(g[2].xj, 1.0);
  EXPECT_EQ(g[3].xi, 2.0);
  EXPECT_EQ(g[3].xj, 1.0);
}

TEST(ResponseSurface, ConstantFisAndPointwiseMatch) {
  std::mt19937_64 rng(17);
  TsFis fis = testing::random_fis(rng, 3, 2);
  std::vector<double> base = testing::random_point(rng, fis);
  const std::vector<SurfacePoint> g = response_surface(fis, 2, 0, base, 7);
  ASSERT_EQ(g.size(), 49u);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    std::vector<double> x = base;
    x[2] = g[idx].xi;
    x[0] = g[idx].xj;
    EXPECT_EQ(g[idx].y, eval_fis(fis, x));
  }
  // axis_i varies fastest
  EXPECT_EQ(g[0].xj, g[6].xj);
  EXPECT_LT(g[0].xi, g[1].xi);

  for (Rule& r : fis.rules) r.consequent = {2.5, 0, 0, 0};
  for (const SurfacePoint& p : response_surface(fis, 0, 1, base, 5)) EXPECT_NEAR(p.y, 2.5, 1e-14);
}

TEST(ResponseSurface, Errors) {
  std::mt19937_64 rng(1);
  const TsFis fis = testing::random_fis(rng, 2, 2);
  const std::vector<double> base{0, 0};
  EXPECT_THROW(response_surface(fis, 0, 0, base, 3), InvalidArgument);
  EXPECT_THROW(response_surface(fis, 0, 2, base, 3), InvalidArgument);
  EXPECT_THROW(response_surface(fis, 0, 1, base, 1), InvalidArgument);
  EXPECT_THROW(response_surface(fis, 0, 1, std::vector{0.0}, 3), InvalidArgument);
}

}  // namespace
}  // namespace hflc
