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


// First-order Takagi-Sugeno inference with Gaussian memberships and a
// product t-norm. Everything here is a pure function of immutable values.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hflc/error.hpp"

namespace hflc {

struct GaussianMf {
  double center = 0.0;
  double sigma = 1.0;
};

// One input variable. [lo, hi] is the expected operating range; it seeds MF
// placement and surface axes but evaluation accepts any finite value.
struct InputSpec {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<GaussianMf> mfs;
};

// Antecedent picks one MF per input; the consequent is
// p[0] + p[1]*x[0] + ... + p[n]*x[n-1].
struct Rule {
  std::vector<std::size_t> antecedent;
  std::vector<double> consequent;
};

struct TsFis {
  std::vector<InputSpec> inputs;
  std::string output_name;
  std::vector<Rule> rules;

  std::size_t input_count() const noexcept { return inputs.size(); }
  std::size_t rule_count() const noexcept { return rules.size(); }
  // Number of consequent coefficients, rules * (inputs + 1).
  std::size_t consequent_count() const noexcept {
    return rules.size() * (inputs.size() + 1);
  }

  // Throws InvalidArgument on any broken structural invariant.
  void validate() const;
};

namespace detail {

inline void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + ": non-finite input value");
    }
  }
}

inline void require_dimension(const TsFis& fis, std::span<const double> x) {
  if (x.size() != fis.input_count()) {
    throw InvalidArgument("input vector has " + std::to_string(x.size()) +
                          " entries, FIS '" + fis.output_name + "' expects " +
                          std::to_string(fis.input_count()));
  }
  require_finite(x, "fis evaluation");
}

inline double consequent_value(const Rule& rule, std::span<const double> x) {
  double f = rule.consequent[0];
  for (std::size_t k = 0; k < x.size(); ++k) f += rule.consequent[k + 1] * x[k];
  return f;
}

// log of the firing strength, -sum (x-c)^2 / (2 sigma^2).
inline double log_firing(const TsFis& fis, const Rule& rule,
                         std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const GaussianMf& mf = fis.inputs[k].mfs[rule.antecedent[k]];
    const double z = (x[k] - mf.center) / mf.sigma;
    acc -= 0.5 * z * z;
  }
  return acc;
}

}  // namespace detail

inline void TsFis::validate() const {
  if (inputs.empty()) throw InvalidArgument("FIS has no inputs");
  if (rules.empty()) throw InvalidArgument("FIS has no rules");
  for (const InputSpec& in : inputs) {
    if (!(in.lo < in.hi)) {
      throw InvalidArgument("input '" + in.name + "' needs lo < hi");
    }
    if (in.mfs.empty()) {
      throw InvalidArgument("input '" + in.name + "' has no membership functions");
    }
    for (std::size_t m = 0; m < in.mfs.size(); ++m) {
      const GaussianMf& mf = in.mfs[m];
      if (!std::isfinite(mf.center) || !std::isfinite(mf.sigma) || !(mf.sigma > 0.0)) {
        throw InvalidArgument("input '" + in.name + "' has an invalid MF");
      }
      if (m > 0 && in.mfs[m - 1].center > mf.center) {
        throw InvalidArgument("input '" + in.name + "' MF centers are not sorted");
      }
    }
  }
  for (const Rule& r : rules) {
    if (r.antecedent.size() != inputs.size()) {
      throw InvalidArgument("rule antecedent length does not match input count");
    }
    if (r.consequent.size() != inputs.size() + 1) {
      throw InvalidArgument("rule consequent length must be inputs + 1");
    }
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      if (r.antecedent[k] >= inputs[k].mfs.size()) {
        throw InvalidArgument("rule references MF " + std::to_string(r.antecedent[k]) +
                              " of input '" + inputs[k].name + "' which has only " +
                              std::to_string(inputs[k].mfs.size()));
      }
    }
    for (double p : r.consequent) {
      if (!std::isfinite(p)) throw InvalidArgument("non-finite consequent coefficient");
    }
  }
}

inline double eval_mf(const GaussianMf& mf, double x) {
  if (!std::isfinite(x)) throw InvalidArgument("eval_mf: non-finite input");
  if (!std::isfinite(mf.center) || !(mf.sigma > 0.0) || !std::isfinite(mf.sigma)) {
    throw InvalidArgument("eval_mf: sigma must be positive and finite");
  }
  const double z = (x - mf.center) / mf.sigma;
  return std::exp(-0.5 * z * z);
}

inline std::vector<double> firing_strengths(const TsFis& fis, std::span<const double> x) {
  detail::require_dimension(fis, x);
  std::vector<double> w(fis.rule_count());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Rule& rule = fis.rules[i];
    double prod = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      prod *= eval_mf(fis.inputs[k].mfs[rule.antecedent[k]], x[k]);
    }
    w[i] = prod;
  }
  return w;
}

inline std::vector<double> normalize(std::span<const double> w) {
  double total = 0.0;
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DegenerateFiring("normalize: firing strengths must be finite and non-negative");
    }
    total += v;
  }
  if (!(total > 0.0)) throw DegenerateFiring("normalize: all firing strengths are zero");
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] / total;
  return out;
}

// Normalized firing strengths computed in the log domain, so inputs far
// outside the MF support do not underflow every rule to zero. Equal to
// normalize(firing_strengths(fis, x)) wherever the latter is defined.
inline std::vector<double> normalized_firing(const TsFis& fis, std::span<const double> x) {
  detail::require_dimension(fis, x);
  std::vector<double> w(fis.rule_count());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = detail::log_firing(fis, fis.rules[i], x);
    if (w[i] > peak) peak = w[i];
  }
  if (!std::isfinite(peak)) throw DegenerateFiring("no rule fires");
  double total = 0.0;
  for (double& v : w) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

inline double eval_fis(const TsFis& fis, std::span<const double> x) {
  const std::vector<double> wbar = normalized_firing(fis, x);
  double y = 0.0;
  for (std::size_t i = 0; i < wbar.size(); ++i) {
    y += wbar[i] * detail::consequent_value(fis.rules[i], x);
  }
  return y;
}

inline double eval_fis(const TsFis& fis, std::initializer_list<double> x) {
  return eval_fis(fis, std::span<const double>(x.begin(), x.size()));
}

// Product of per-input MF counts; saturates at SIZE_MAX.
inline std::size_t grid_rule_count(std::span<const std::size_t> mf_counts) {
  std::size_t n = 1;
  for (std::size_t m : mf_counts) {
    if (m != 0 && n > std::numeric_limits<std::size_t>::max() / m) {
      return std::numeric_limits<std::size_t>::max();
    }
    n *= m;
  }
  return n;
}

// Full Cartesian rule base, lexicographic in antecedent indices (the last
// input varies fastest), consequents zeroed.
inline TsFis grid_partition(std::vector<InputSpec> inputs, std::string output_name = "y") {
  if (inputs.empty()) throw InvalidArgument("grid_partition: no inputs");
  std::vector<std::size_t> counts;
  for (const InputSpec& in : inputs) {
    if (in.mfs.size() < 2) {
      throw InvalidArgument("grid_partition: input '" + in.name + "' needs at least 2 MFs");
    }
    counts.push_back(in.mfs.size());
  }
  const std::size_t n_rules = grid_rule_count(counts);

  TsFis fis;
  fis.inputs = std::move(inputs);
  fis.output_name = std::move(output_name);
  fis.rules.reserve(n_rules);
  std::vector<std::size_t> idx(counts.size(), 0);
  for (std::size_t r = 0; r < n_rules; ++r) {
    fis.rules.push_back(Rule{idx, std::vector<double>(counts.size() + 1, 0.0)});
    for (std::size_t k = counts.size(); k-- > 0;) {
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
    }
  }
  fis.validate();
  return fis;
}

struct SurfacePoint {
  double xi = 0.0;
  double xj = 0.0;
  double y = 0.0;
};

// Samples the output on a resolution x resolution grid spanning [lo, hi] of
// inputs axis_i and axis_j. `base` supplies every input; the two axis entries
// are overwritten. Row-major with axis_i varying fastest.
inline std::vector<SurfacePoint> response_surface(const TsFis& fis, std::size_t axis_i,
                                                  std::size_t axis_j,
                                                  std::span<const double> base,
                                                  std::size_t resolution) {
  const std::size_t n = fis.input_count();
  if (axis_i >= n || axis_j >= n || axis_i == axis_j) {
    throw InvalidArgument("response_surface: axes must be two distinct input indices");
  }
  if (resolution < 2) throw InvalidArgument("response_surface: resolution must be >= 2");
  if (base.size() != n) {
    throw InvalidArgument("response_surface: fixed values must cover every input");
  }
  const InputSpec& in_i = fis.inputs[axis_i];
  const InputSpec& in_j = fis.inputs[axis_j];
  const auto node = [resolution](const InputSpec& in, std::size_t a) {
    if (a + 1 == resolution) return in.hi;
    return in.lo + (in.hi - in.lo) * static_cast<double>(a) /
                       static_cast<double>(resolution - 1);
  };

  std::vector<double> x(base.begin(), base.end());
  std::vector<SurfacePoint> out;
  out.reserve(resolution * resolution);
  for (std::size_t b = 0; b < resolution; ++b) {
    for (std::size_t a = 0; a < resolution; ++a) {
      x[axis_i] = node(in_i, a);
      x[axis_j] = node(in_j, b);
      out.push_back({x[axis_i], x[axis_j], eval_fis(fis, x)});
    }
  }
  return out;
}

}  // namespace hflc
