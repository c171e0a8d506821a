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


// Hybrid ANFIS learning: ridge least squares for the consequents, batch
// gradient descent for the Gaussian premises.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hflc/error.hpp"
#include "hflc/fuzzy.hpp"

namespace hflc {

struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

struct Dataset {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<std::string> input_names;  // optional; defaults to x0, x1, ...
  std::string output_name = "y";
  std::vector<Sample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t dimension() const noexcept {
    return samples.empty() ? input_names.size() : samples.front().x.size();
  }
  void validate() const {
    if (samples.empty()) throw InvalidArgument("dataset '" + name + "' is empty");
    const std::size_t n = samples.front().x.size();
    if (n == 0) throw InvalidArgument("dataset '" + name + "' has no input columns");
    if (!input_names.empty() && input_names.size() != n) {
      throw InvalidArgument("dataset '" + name + "' input names do not match columns");
    }
    for (const Sample& s : samples) {
      if (s.x.size() != n) throw InvalidArgument("dataset '" + name + "' has ragged rows");
      detail::require_finite(s.x, "dataset");
      if (!std::isfinite(s.y)) throw InvalidArgument("dataset '" + name + "' has a non-finite target");
    }
  }
};

struct TrainConfig {
  int epochs = 50;
  double learn_rate = 0.01;
  double ridge_lambda = 1e-6;
  int mfs_per_input = 0;  // 0 selects 3 MFs for <= 3 inputs, else 2
  std::uint64_t seed = 0;

  std::size_t mfs_for(std::size_t n_inputs) const noexcept {
    if (mfs_per_input > 0) return static_cast<std::size_t>(mfs_per_input);
    return n_inputs <= 3 ? 3 : 2;
  }
  void validate() const {
    if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
    if (!(learn_rate > 0.0) || !std::isfinite(learn_rate)) {
      throw InvalidArgument("learn_rate must be positive");
    }
    if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
      throw InvalidArgument("ridge_lambda must be >= 0");
    }
    if (mfs_per_input == 1 || mfs_per_input < 0) {
      throw InvalidArgument("mfs_per_input must be >= 2 (or 0 for automatic)");
    }
  }
};

struct TrainReport {
  std::vector<double> epoch_rmse;
  double final_train_se = 0.0;
  int epochs_run = 0;
};

struct Evaluation {
  double cumulative_se = 0.0;
  double rmse = 0.0;
};

inline Evaluation evaluate(const TsFis& fis, const Dataset& data) {
  if (data.samples.empty()) throw InvalidArgument("evaluate: empty dataset");
  Evaluation ev;
  for (const Sample& s : data.samples) {
    const double r = eval_fis(fis, s.x) - s.y;
    ev.cumulative_se += r * r;
  }
  ev.rmse = std::sqrt(ev.cumulative_se / static_cast<double>(data.samples.size()));
  return ev;
}

// Range per input is the observed [min, max] widened by 10% of the span on
// each side (by 1.0 when the column is constant); centers are equally spaced
// and every sigma is (hi - lo) / (2 (M - 1)).
inline std::vector<InputSpec> init_premises(const Dataset& data, std::size_t mfs_per_input) {
  if (data.samples.empty()) throw InvalidArgument("init_premises: empty dataset");
  if (mfs_per_input < 2) throw InvalidArgument("init_premises: need at least 2 MFs per input");
  const std::size_t n = data.samples.front().x.size();
  std::vector<InputSpec> specs(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lo = data.samples.front().x[k];
    double hi = lo;
    for (const Sample& s : data.samples) {
      lo = std::min(lo, s.x[k]);
      hi = std::max(hi, s.x[k]);
    }
    const double span = hi - lo;
    const double pad = span > 0.0 ? 0.1 * span : 1.0;
    lo -= pad;
    hi += pad;

    InputSpec& in = specs[k];
    in.name = k < data.input_names.size() ? data.input_names[k] : "x" + std::to_string(k);
    in.lo = lo;
    in.hi = hi;
    const double step = (hi - lo) / static_cast<double>(mfs_per_input - 1);
    const double sigma = (hi - lo) / (2.0 * static_cast<double>(mfs_per_input - 1));
    for (std::size_t m = 0; m < mfs_per_input; ++m) {
      const double c = (m + 1 == mfs_per_input) ? hi : lo + step * static_cast<double>(m);
      in.mfs.push_back({c, sigma});
    }
  }
  return specs;
}

namespace detail {

// Row s holds wbar_i(x_s) * [1, x_s] for every rule i, rule-major.
inline Eigen::MatrixXd consequent_design(const TsFis& fis, const Dataset& data) {
  const std::size_t n = fis.input_count();
  const std::size_t stride = n + 1;
  Eigen::MatrixXd a(data.size(), fis.consequent_count());
  for (std::size_t s = 0; s < data.size(); ++s) {
    const std::vector<double>& x = data.samples[s].x;
    const std::vector<double> wbar = normalized_firing(fis, x);
    for (std::size_t i = 0; i < wbar.size(); ++i) {
      const std::size_t col = i * stride;
      a(s, col) = wbar[i];
      for (std::size_t k = 0; k < n; ++k) a(s, col + 1 + k) = wbar[i] * x[k];
    }
  }
  return a;
}

}  // namespace detail

// Replaces every consequent with the minimizer of
//   sum_s (eval_fis(x_s) - y_s)^2 + lambda * |p|^2
// on a copy of `fis`. For lambda > 0 the stacked system [A; sqrt(lambda) I]
// is solved by Householder QR; lambda == 0 uses column-pivoted QR and
// rejects rank-deficient designs.
inline TsFis lse_consequents(const TsFis& fis, const Dataset& data, double ridge_lambda) {
  if (data.samples.empty()) throw InvalidArgument("lse_consequents: empty dataset");
  if (data.dimension() != fis.input_count()) {
    throw InvalidArgument("lse_consequents: dataset dimension does not match FIS");
  }
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
    throw InvalidArgument("lse_consequents: ridge_lambda must be >= 0");
  }
  const Eigen::MatrixXd a = detail::consequent_design(fis, data);
  if (!a.allFinite()) throw NumericalError("lse_consequents: non-finite design matrix");

  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Eigen::VectorXd y(rows);
  for (Eigen::Index s = 0; s < rows; ++s) y(s) = data.samples[static_cast<std::size_t>(s)].y;

  Eigen::VectorXd p;
  if (ridge_lambda > 0.0) {
    Eigen::MatrixXd stacked = Eigen::MatrixXd::Zero(rows + cols, cols);
    stacked.topRows(rows) = a;
    stacked.bottomRows(cols).diagonal().setConstant(std::sqrt(ridge_lambda));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows + cols);
    rhs.head(rows) = y;
    p = stacked.householderQr().solve(rhs);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < cols) {
      throw RankDeficient("lse_consequents: design matrix has rank " +
                          std::to_string(qr.rank()) + " < " + std::to_string(cols) +
                          " unknowns; set ridge_lambda > 0");
    }
    p = qr.solve(y);
  }
  if (!p.allFinite()) throw NumericalError("lse_consequents: non-finite solution");

  TsFis out = fis;
  const std::size_t stride = fis.input_count() + 1;
  for (std::size_t i = 0; i < out.rules.size(); ++i) {
    for (std::size_t k = 0; k < stride; ++k) {
      out.rules[i].consequent[k] = p(static_cast<Eigen::Index>(i * stride + k));
    }
  }
  return out;
}

// d/dcenter and d/dsigma of a squared error, indexed [input][mf].
struct PremiseGradient {
  std::vector<std::vector<double>> d_center;
  std::vector<std::vector<double>> d_sigma;

  static PremiseGradient zeros_like(const TsFis& fis) {
    PremiseGradient g;
    for (const InputSpec& in : fis.inputs) {
      g.d_center.emplace_back(in.mfs.size(), 0.0);
      g.d_sigma.emplace_back(in.mfs.size(), 0.0);
    }
    return g;
  }
};

namespace detail {

// Adds scale * d(eval_fis(x) - y)^2 / d(premises) into g.
inline void accumulate_premise_gradient(const TsFis& fis, const Sample& sample, double scale,
                                        PremiseGradient& g) {
  const std::vector<double> wbar = normalized_firing(fis, sample.x);
  std::vector<double> f(wbar.size());
  double yhat = 0.0;
  for (std::size_t i = 0; i < wbar.size(); ++i) {
    f[i] = consequent_value(fis.rules[i], sample.x);
    yhat += wbar[i] * f[i];
  }
  const double residual = yhat - sample.y;
  // dyhat/dtheta = sum_i wbar_i (f_i - yhat) dlog(w_i)/dtheta
  for (std::size_t i = 0; i < wbar.size(); ++i) {
    const double gi = scale * 2.0 * residual * wbar[i] * (f[i] - yhat);
    if (gi == 0.0) continue;
    const Rule& rule = fis.rules[i];
    for (std::size_t k = 0; k < sample.x.size(); ++k) {
      const std::size_t m = rule.antecedent[k];
      const GaussianMf& mf = fis.inputs[k].mfs[m];
      const double d = sample.x[k] - mf.center;
      const double s2 = mf.sigma * mf.sigma;
      g.d_center[k][m] += gi * d / s2;
      g.d_sigma[k][m] += gi * d * d / (s2 * mf.sigma);
    }
  }
}

}  // namespace detail

inline PremiseGradient premise_gradients(const TsFis& fis, const Sample& sample) {
  detail::require_dimension(fis, sample.x);
  PremiseGradient g = PremiseGradient::zeros_like(fis);
  detail::accumulate_premise_gradient(fis, sample, 1.0, g);
  return g;
}

struct TrainResult {
  TsFis fis;
  TrainReport report;
};

// Per epoch: LSE on consequents, record RMSE, then one full-batch gradient
// step on premises using the mean squared error. The last epoch skips the
// premise step so the returned model is exactly the one last measured.
inline TrainResult train_hybrid(const Dataset& data, const TrainConfig& config) {
  data.validate();
  config.validate();

  const std::size_t n = data.dimension();
  TsFis fis = grid_partition(init_premises(data, config.mfs_for(n)), data.output_name);
  std::vector<double> sigma_floor(n);
  for (std::size_t k = 0; k < n; ++k) sigma_floor[k] = 1e-6 * (fis.inputs[k].hi - fis.inputs[k].lo);

  TrainReport report;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    fis = lse_consequents(fis, data, config.ridge_lambda);
    const Evaluation ev = evaluate(fis, data);
    if (!std::isfinite(ev.cumulative_se)) {
      throw Divergence("training diverged at epoch " + std::to_string(epoch + 1));
    }
    report.epoch_rmse.push_back(ev.rmse);
    report.epochs_run = epoch + 1;
    if (epoch + 1 == config.epochs) break;

    PremiseGradient g = PremiseGradient::zeros_like(fis);
    for (const Sample& s : data.samples) detail::accumulate_premise_gradient(fis, s, inv_n, g);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<GaussianMf>& mfs = fis.inputs[k].mfs;
      for (std::size_t m = 0; m < mfs.size(); ++m) {
        mfs[m].center -= config.learn_rate * g.d_center[k][m];
        mfs[m].sigma -= config.learn_rate * g.d_sigma[k][m];
        if (!std::isfinite(mfs[m].center) || !std::isfinite(mfs[m].sigma)) {
          throw Divergence("premise update went non-finite at epoch " + std::to_string(epoch + 1));
        }
        mfs[m].sigma = std::max(mfs[m].sigma, sigma_floor[k]);
        // keep centers sorted so MF indices stay ordered
        if (m > 0) mfs[m].center = std::max(mfs[m].center, mfs[m - 1].center);
      }
    }
  }
  report.final_train_se = evaluate(fis, data).cumulative_se;
  return {std::move(fis), std::move(report)};
}

}  // namespace hflc
