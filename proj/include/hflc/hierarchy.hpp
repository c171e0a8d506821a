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


// The COM-centered controller hierarchy. Per leg three nodes form a cycle:
//
//   (x0, y0, beta)      -> gamma          HFLC1 / HFLC2
//   (x0, y0, gamma)     -> (xc, yc)       HFLC3 / HFLC4
//   (x0, y0, xc, yc)    -> beta           HFLC5 / HFLC6
//
// The cycle is resolved by a sequential fixed-point sweep, and a supervisor
// recovers the COM from the stance-leg signals.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hflc/anfis.hpp"
#include "hflc/biped.hpp"
#include "hflc/error.hpp"
#include "hflc/fuzzy.hpp"

namespace hflc {

enum class Leg { left, right };

inline std::string_view to_string(Leg leg) { return leg == Leg::left ? "left" : "right"; }

inline Leg leg_from_string(std::string_view s) {
  if (s == "left") return Leg::left;
  if (s == "right") return Leg::right;
  throw ParseError("unknown leg '" + std::string(s) + "'");
}

struct ControllerSpec {
  std::string id;
  Leg leg = Leg::left;
  std::vector<std::string> input_signals;
  std::vector<std::string> output_signals;

  bool is_placeholder() const noexcept { return input_signals.empty() && output_signals.empty(); }
  friend bool operator==(const ControllerSpec&, const ControllerSpec&) = default;
};

// Left-leg signal name to its right-leg twin; COM signals map to themselves.
inline std::string mirror_signal(std::string_view name) {
  if (name == "beta_left") return "beta_right";
  if (name == "gamma_left") return "gamma_right";
  if (name == "xcl") return "xcr";
  if (name == "ycl") return "ycr";
  if (name == "beta_right") return "beta_left";
  if (name == "gamma_right") return "gamma_left";
  if (name == "xcr") return "xcl";
  if (name == "ycr") return "ycl";
  return std::string(name);
}

inline ControllerSpec mirror_spec(const ControllerSpec& spec, std::string id) {
  ControllerSpec out{std::move(id), spec.leg == Leg::left ? Leg::right : Leg::left, {}, {}};
  for (const std::string& s : spec.input_signals) out.input_signals.push_back(mirror_signal(s));
  for (const std::string& s : spec.output_signals) out.output_signals.push_back(mirror_signal(s));
  return out;
}

// HFLC1..HFLC6 in id order.
inline std::vector<ControllerSpec> build_specs() {
  const ControllerSpec h1{"HFLC1", Leg::left, {"x0", "y0", "beta_left"}, {"gamma_left"}};
  const ControllerSpec h3{"HFLC3", Leg::left, {"x0", "y0", "gamma_left"}, {"xcl", "ycl"}};
  const ControllerSpec h5{"HFLC5", Leg::left, {"x0", "y0", "xcl", "ycl"}, {"beta_left"}};
  return {h1, mirror_spec(h1, "HFLC2"), h3, mirror_spec(h3, "HFLC4"),
          h5, mirror_spec(h5, "HFLC6")};
}

// The fourth controller of each leg is named but has no defined I/O; it is
// kept as an inert placeholder outside training and the chain.
inline std::vector<ControllerSpec> placeholder_specs() {
  return {{"HFLC7", Leg::left, {}, {}}, {"HFLC8", Leg::right, {}, {}}};
}

// Every input must be x0, y0 or produced by some spec in the set.
inline void check_wiring_closure(const std::vector<ControllerSpec>& specs) {
  std::set<std::string> produced{"x0", "y0"};
  for (const ControllerSpec& s : specs) produced.insert(s.output_signals.begin(), s.output_signals.end());
  for (const ControllerSpec& s : specs) {
    for (const std::string& in : s.input_signals) {
      if (!produced.contains(in)) {
        throw WiringError(s.id + " consumes '" + in + "' which no controller produces");
      }
    }
  }
}

inline Dataset project_dataset(const std::vector<GaitSample>& samples, const ControllerSpec& spec,
                               std::size_t output_index) {
  if (output_index >= spec.output_signals.size()) {
    throw InvalidArgument(spec.id + " has no output index " + std::to_string(output_index));
  }
  Dataset d;
  d.name = spec.id + ":" + spec.output_signals[output_index];
  d.input_names = spec.input_signals;
  d.output_name = spec.output_signals[output_index];
  d.samples.reserve(samples.size());
  for (const GaitSample& g : samples) {
    Sample s;
    for (const std::string& in : spec.input_signals) s.x.push_back(signal_value(g, in));
    s.y = signal_value(g, d.output_name);
    d.samples.push_back(std::move(s));
  }
  return d;
}

struct TrainedModel {
  TsFis fis;
  std::uint64_t seed = 0;
  double train_se = 0.0;
  double train_rmse = 0.0;
  int epochs_run = 0;
};

struct HflcNode {
  ControllerSpec spec;
  std::vector<TrainedModel> models;  // one per output signal

  double eval(std::size_t output_index, std::span<const double> x) const {
    return eval_fis(models.at(output_index).fis, x);
  }
};

struct Hierarchy {
  std::vector<HflcNode> nodes;
  BipedParams params;
  TrainConfig config;

  const HflcNode& node(std::string_view id) const {
    for (const HflcNode& n : nodes) {
      if (n.spec.id == id) return n;
    }
    throw InvalidArgument("no controller named '" + std::string(id) + "'");
  }

  void validate() const {
    std::vector<ControllerSpec> specs;
    for (const HflcNode& n : nodes) {
      specs.push_back(n.spec);
      if (n.models.size() != n.spec.output_signals.size()) {
        throw InvalidArgument(n.spec.id + ": model count does not match outputs");
      }
      for (const TrainedModel& m : n.models) {
        m.fis.validate();
        if (m.fis.input_count() != n.spec.input_signals.size()) {
          throw InvalidArgument(n.spec.id + ": model input count does not match spec");
        }
      }
    }
    check_wiring_closure(specs);
  }
};

// FNV-1a over "<id>#<output index>"; stable across platforms and runs.
inline std::uint64_t model_seed_offset(std::string_view id, std::size_t output_index) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (char c : id) mix(static_cast<unsigned char>(c));
  mix('#');
  for (char c : std::to_string(output_index)) mix(static_cast<unsigned char>(c));
  return h;
}

inline TrainedModel train_model(const std::vector<GaitSample>& samples, const ControllerSpec& spec,
                                std::size_t output_index, const TrainConfig& config) {
  return with_context(spec.id + " output " + std::to_string(output_index), [&] {
    TrainConfig cfg = config;
    cfg.seed = config.seed + model_seed_offset(spec.id, output_index);
    const Dataset data = project_dataset(samples, spec, output_index);
    TrainResult r = train_hybrid(data, cfg);
    TrainedModel m;
    m.seed = cfg.seed;
    m.train_se = r.report.final_train_se;
    m.train_rmse = std::sqrt(r.report.final_train_se / static_cast<double>(data.size()));
    m.epochs_run = r.report.epochs_run;
    m.fis = std::move(r.fis);
    return m;
  });
}

inline Hierarchy train_hierarchy(const std::vector<GaitSample>& samples, const TrainConfig& config,
                                 const BipedParams& params = {}) {
  if (samples.empty()) throw InvalidArgument("train_hierarchy: no samples");
  config.validate();
  params.validate();
  const std::vector<ControllerSpec> specs = build_specs();
  check_wiring_closure(specs);
  Hierarchy h;
  h.params = params;
  h.config = config;
  for (const ControllerSpec& spec : specs) {
    HflcNode node{spec, {}};
    for (std::size_t o = 0; o < spec.output_signals.size(); ++o) {
      node.models.push_back(train_model(samples, spec, o, config));
    }
    h.nodes.push_back(std::move(node));
  }
  return h;
}

struct LegSignals {
  double beta = 0.0;
  double gamma = 0.0;
  PlanarPoint ankle;
};

struct ChainState {
  LegSignals left;
  LegSignals right;

  const LegSignals& leg(Leg l) const { return l == Leg::left ? left : right; }
  LegSignals& leg(Leg l) { return l == Leg::left ? left : right; }
};

inline ChainState chain_state_from(const GaitSample& s) {
  return {{s.beta_left, s.gamma_left, s.ankle_left}, {s.beta_right, s.gamma_right, s.ankle_right}};
}

struct ChainResult {
  ChainState signals;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

namespace detail {

struct LegChain {
  Leg leg;
  const HflcNode* knee;   // (x0, y0, beta) -> gamma
  const HflcNode* ankle;  // (x0, y0, gamma) -> (xc, yc)
  const HflcNode* hip;    // (x0, y0, xc, yc) -> beta
};

inline double checked(double v, const HflcNode& node, int iteration) {
  if (!std::isfinite(v)) {
    throw Divergence(node.spec.id + " produced a non-finite signal at iteration " +
                     std::to_string(iteration));
  }
  return v;
}

inline double max_change(const LegSignals& a, const LegSignals& b) {
  return std::max({std::abs(a.beta - b.beta), std::abs(a.gamma - b.gamma),
                   std::abs(a.ankle.x - b.ankle.x), std::abs(a.ankle.y - b.ankle.y)});
}

}  // namespace detail

inline constexpr int kDefaultChainMaxIter = 20;
inline constexpr double kDefaultChainTol = 1e-6;

// Gauss-Seidel sweep gamma <- knee(beta), ankle <- ankle(gamma),
// beta <- hip(ankle) on both legs until no signal moves more than tol.
inline ChainResult run_chain(const Hierarchy& h, PlanarPoint com_ref, const ChainState& warm_start,
                             int max_iter = kDefaultChainMaxIter,
                             double tol = kDefaultChainTol) {
  if (max_iter < 1) throw InvalidArgument("run_chain: max_iter must be >= 1");
  if (!(tol >= 0.0)) throw InvalidArgument("run_chain: tol must be >= 0");
  if (!std::isfinite(com_ref.x) || !std::isfinite(com_ref.y)) {
    throw InvalidArgument("run_chain: non-finite COM reference");
  }
  const std::array<detail::LegChain, 2> legs{{
      {Leg::left, &h.node("HFLC1"), &h.node("HFLC3"), &h.node("HFLC5")},
      {Leg::right, &h.node("HFLC2"), &h.node("HFLC4"), &h.node("HFLC6")},
  }};

  ChainResult res;
  res.signals = warm_start;
  for (int it = 1; it <= max_iter; ++it) {
    double change = 0.0;
    for (const detail::LegChain& lc : legs) {
      LegSignals& s = res.signals.leg(lc.leg);
      const LegSignals before = s;
      const double x0 = com_ref.x;
      const double y0 = com_ref.y;
      s.gamma = detail::checked(lc.knee->eval(0, std::array{x0, y0, s.beta}), *lc.knee, it);
      const std::array knee_in{x0, y0, s.gamma};
      s.ankle.x = detail::checked(lc.ankle->eval(0, knee_in), *lc.ankle, it);
      s.ankle.y = detail::checked(lc.ankle->eval(1, knee_in), *lc.ankle, it);
      s.beta = detail::checked(lc.hip->eval(0, std::array{x0, y0, s.ankle.x, s.ankle.y}), *lc.hip, it);
      change = std::max(change, detail::max_change(before, s));
    }
    res.iterations = it;
    res.residual = change;
    if (change <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

struct WalkRecord {
  double t = 0.0;
  PlanarPoint com_ref;
  PlanarPoint com_est;
  ChainState signals;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;

  double com_error() const { return distance(com_est, com_ref); }
};

inline std::vector<WalkRecord> closed_loop_walk(const Hierarchy& h, const GaitSpec& gait, int n_steps,
                                                int max_iter = kDefaultChainMaxIter,
                                                double tol = kDefaultChainTol) {
  if (n_steps < 1) throw InvalidArgument("closed_loop_walk: n_steps must be >= 1");
  gait.validate();
  ChainState warm = chain_state_from(gait_sample_at(h.params, gait, 0.0));
  std::vector<WalkRecord> log;
  log.reserve(static_cast<std::size_t>(n_steps));
  for (int j = 0; j < n_steps; ++j) {
    const double t = n_steps == 1 ? 0.0 : static_cast<double>(j) / (n_steps - 1);
    WalkRecord rec;
    rec.t = t;
    rec.com_ref = com_trajectory(gait, t);
    const ChainResult cr = with_context("walk phase " + std::to_string(j), [&] {
      return run_chain(h, rec.com_ref, warm, max_iter, tol);
    });
    rec.signals = cr.signals;
    rec.iterations = cr.iterations;
    rec.converged = cr.converged;
    rec.residual = cr.residual;
    const LegSignals& stance = cr.signals.left;
    rec.com_est = supervise_com(h.params, stance.ankle, {stance.beta, stance.gamma});
    log.push_back(rec);
    warm = cr.signals;
  }
  return log;
}

struct WalkSummary {
  double mean_com_error = 0.0;
  double max_com_error = 0.0;
  double convergence_rate = 0.0;
};

inline WalkSummary summarize(const std::vector<WalkRecord>& log) {
  WalkSummary s;
  if (log.empty()) return s;
  std::size_t converged = 0;
  for (const WalkRecord& r : log) {
    const double e = r.com_error();
    s.mean_com_error += e;
    s.max_com_error = std::max(s.max_com_error, e);
    converged += r.converged ? 1 : 0;
  }
  s.mean_com_error /= static_cast<double>(log.size());
  s.convergence_rate = static_cast<double>(converged) / static_cast<double>(log.size());
  return s;
}

// Grid-partition rule accounting for the hierarchy against one flat rule base
// over every distinct left-leg signal.
struct RuleCountReport {
  struct NodeCount {
    std::string id;
    std::size_t rules_per_model = 0;
    std::size_t models = 0;
  };
  std::vector<NodeCount> left_nodes;
  std::size_t per_node_total = 0;   // each node's rule base counted once
  std::size_t per_model_total = 0;  // multi-output nodes counted per model
  std::vector<std::string> flat_signals;
  std::size_t flat_baseline = 0;

  bool hierarchy_is_smaller() const { return per_model_total < flat_baseline; }
};

namespace detail {

inline RuleCountReport rule_report(const std::vector<ControllerSpec>& specs,
                                   const std::vector<std::vector<std::size_t>>& mf_counts) {
  RuleCountReport rep;
  std::map<std::string, std::size_t> signal_mfs;  // most MFs any node gives the signal
  std::set<std::string> outputs_only;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ControllerSpec& s = specs[i];
    if (s.leg != Leg::left || s.is_placeholder()) continue;
    const std::size_t rules = grid_rule_count(mf_counts[i]);
    rep.left_nodes.push_back({s.id, rules, s.output_signals.size()});
    rep.per_node_total += rules;
    rep.per_model_total += rules * s.output_signals.size();
    for (std::size_t k = 0; k < s.input_signals.size(); ++k) {
      std::size_t& m = signal_mfs[s.input_signals[k]];
      m = std::max(m, mf_counts[i][k]);
    }
    outputs_only.insert(s.output_signals.begin(), s.output_signals.end());
  }
  // Outputs nobody consumes still count as flat-system variables.
  std::size_t default_m = 2;
  for (const auto& [name, m] : signal_mfs) default_m = std::max(default_m, m);
  for (const std::string& o : outputs_only) signal_mfs.try_emplace(o, default_m);
  std::vector<std::size_t> counts;
  for (const auto& [name, m] : signal_mfs) {
    rep.flat_signals.push_back(name);
    counts.push_back(m);
  }
  rep.flat_baseline = grid_rule_count(counts);
  return rep;
}

}  // namespace detail

// Counts from the configured MF numbers (no training required).
inline RuleCountReport rule_count_report(const TrainConfig& config) {
  const std::vector<ControllerSpec> specs = build_specs();
  std::vector<std::vector<std::size_t>> counts;
  for (const ControllerSpec& s : specs) {
    counts.emplace_back(s.input_signals.size(), config.mfs_for(s.input_signals.size()));
  }
  return detail::rule_report(specs, counts);
}

// Counts read off the trained models.
inline RuleCountReport rule_count_report(const Hierarchy& h) {
  std::vector<ControllerSpec> specs;
  std::vector<std::vector<std::size_t>> counts;
  for (const HflcNode& n : h.nodes) {
    specs.push_back(n.spec);
    std::vector<std::size_t> c;
    if (!n.models.empty()) {
      for (const InputSpec& in : n.models.front().fis.inputs) c.push_back(in.mfs.size());
    } else {
      c.assign(n.spec.input_signals.size(), h.config.mfs_for(n.spec.input_signals.size()));
    }
    counts.push_back(std::move(c));
  }
  return detail::rule_report(specs, counts);
}

}  // namespace hflc
