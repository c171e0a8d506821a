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


// Planar two-link leg kinematics and the gait data generator. The body is a
// point mass at the hip, so the COM and the hip coincide.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hflc/error.hpp"

namespace hflc {

struct BipedParams {
  double l_thigh = 0.5;  // m
  double l_shank = 0.5;  // m

  void validate() const {
    if (!(l_thigh > 0.0) || !(l_shank > 0.0) || !std::isfinite(l_thigh) ||
        !std::isfinite(l_shank)) {
      throw InvalidArgument("segment lengths must be positive");
    }
  }
};

// beta: hip angle from the downward vertical, positive toward +x.
// gamma: knee flexion, 0 for a straight leg.
struct LegPose {
  double beta = 0.0;
  double gamma = 0.0;
};

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.x + b.x, a.y + b.y}; }
  friend PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

inline double distance(PlanarPoint a, PlanarPoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct GaitSpec {
  double step_length = 0.3;
  double step_height = 0.05;
  double com_height = 0.9;
  double com_bob = 0.02;
  int n_samples = 30;
  std::uint64_t seed = 1;
  double phase_jitter = 0.1;

  void validate() const {
    if (!(step_length > 0.0)) throw InvalidArgument("step_length must be > 0");
    if (!(step_height >= 0.0)) throw InvalidArgument("step_height must be >= 0");
    if (!(com_height > 0.0)) throw InvalidArgument("com_height must be > 0");
    if (!(com_bob >= 0.0)) throw InvalidArgument("com_bob must be >= 0");
    if (!(phase_jitter >= 0.0 && phase_jitter < 0.5)) {
      throw InvalidArgument("phase_jitter must be in [0, 0.5)");
    }
  }
};

// Left leg is the stance leg, right leg swings.
struct GaitSample {
  double t = 0.0;
  PlanarPoint com;
  double beta_left = 0.0;
  double gamma_left = 0.0;
  PlanarPoint ankle_left;
  double beta_right = 0.0;
  double gamma_right = 0.0;
  PlanarPoint ankle_right;

  LegPose pose_left() const { return {beta_left, gamma_left}; }
  LegPose pose_right() const { return {beta_right, gamma_right}; }
};

struct LegPoints {
  PlanarPoint knee;
  PlanarPoint ankle;
};

inline LegPoints forward_kinematics(const BipedParams& p, PlanarPoint hip, LegPose pose) {
  const PlanarPoint knee{hip.x + p.l_thigh * std::sin(pose.beta),
                         hip.y - p.l_thigh * std::cos(pose.beta)};
  const double shank = pose.beta + pose.gamma;
  const PlanarPoint ankle{knee.x + p.l_shank * std::sin(shank),
                          knee.y - p.l_shank * std::cos(shank)};
  return {knee, ankle};
}

// Closed-form IK on the gamma >= 0 branch.
inline LegPose inverse_kinematics(const BipedParams& p, PlanarPoint hip, PlanarPoint ankle) {
  constexpr double kReachTol = 1e-12;
  const double dx = ankle.x - hip.x;
  const double dy = ankle.y - hip.y;
  const double d = std::hypot(dx, dy);
  const double d_min = std::abs(p.l_thigh - p.l_shank);
  const double d_max = p.l_thigh + p.l_shank;
  if (!std::isfinite(d) || d < d_min - kReachTol || d > d_max + kReachTol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "ankle unreachable: distance " << d << " outside [" << d_min << ", " << d_max << "]";
    throw Unreachable(msg.str());
  }
  const double lt = p.l_thigh;
  const double ls = p.l_shank;
  const double cos_knee = std::clamp((lt * lt + ls * ls - d * d) / (2.0 * lt * ls), -1.0, 1.0);
  const double gamma = std::numbers::pi - std::acos(cos_knee);
  // hip->ankle direction measured from the downward vertical, minus the
  // angle between thigh and that line
  const double phi = std::atan2(dx, -dy);
  const double alpha = std::atan2(ls * std::sin(gamma), lt + ls * std::cos(gamma));
  return {phi - alpha, gamma};
}

// Inverts forward kinematics through the stance leg: the hip (COM) position
// that puts the ankle at `stance_ankle` for the given pose.
inline PlanarPoint supervise_com(const BipedParams& p, PlanarPoint stance_ankle, LegPose pose) {
  const double shank = pose.beta + pose.gamma;
  return {stance_ankle.x - p.l_shank * std::sin(shank) - p.l_thigh * std::sin(pose.beta),
          stance_ankle.y + p.l_shank * std::cos(shank) + p.l_thigh * std::cos(pose.beta)};
}

inline PlanarPoint com_trajectory(const GaitSpec& g, double t) {
  return {g.step_length * t, g.com_height + g.com_bob * std::sin(2.0 * std::numbers::pi * t)};
}

inline PlanarPoint swing_ankle_trajectory(const GaitSpec& g, double t) {
  return {-0.5 * g.step_length + g.step_length * t, g.step_height * std::sin(std::numbers::pi * t)};
}

inline constexpr PlanarPoint kStanceAnkle{0.0, 0.0};

// Full kinematic record at phase t.
inline GaitSample gait_sample_at(const BipedParams& p, const GaitSpec& g, double t) {
  GaitSample s;
  s.t = t;
  s.com = com_trajectory(g, t);
  s.ankle_left = kStanceAnkle;
  s.ankle_right = swing_ankle_trajectory(g, t);
  try {
    const LegPose left = inverse_kinematics(p, s.com, s.ankle_left);
    const LegPose right = inverse_kinematics(p, s.com, s.ankle_right);
    s.beta_left = left.beta;
    s.gamma_left = left.gamma;
    s.beta_right = right.beta;
    s.gamma_right = right.gamma;
  } catch (const Unreachable& e) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "gait phase t=" << t << " (com " << s.com.x << "," << s.com.y << "; swing ankle "
        << s.ankle_right.x << "," << s.ankle_right.y << "): " << e.what();
    throw Unreachable(msg.str());
  }
  return s;
}

// Stratified, jittered phases t_i = (i + u_i * jitter) / n, u_i ~ U[-1, 1].
inline std::vector<GaitSample> generate_dataset(const BipedParams& p, const GaitSpec& g, int n,
                                                std::uint64_t seed) {
  p.validate();
  g.validate();
  if (n < 2) throw InvalidArgument("n must be >= 2");
  std::mt19937_64 rng(seed);
  std::vector<GaitSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // 53-bit uniform in [0, 1), mapped to [-1, 1); independent of the
    // standard library's distribution implementation
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double u = 2.0 * unit - 1.0;
    const double t = std::clamp((static_cast<double>(i) + u * g.phase_jitter) / n, 0.0, 1.0);
    out.push_back(gait_sample_at(p, g, t));
  }
  return out;
}

inline std::vector<GaitSample> generate_dataset(const BipedParams& p, const GaitSpec& g) {
  return generate_dataset(p, g, g.n_samples, g.seed);
}

// Signal names as used by the controller wiring and the dataset CSV.
inline constexpr std::array<std::string_view, 10> kSignalNames = {
    "x0", "y0", "beta_left", "gamma_left", "xcl", "ycl", "beta_right", "gamma_right", "xcr", "ycr"};

inline double signal_value(const GaitSample& s, std::string_view name) {
  if (name == "x0") return s.com.x;
  if (name == "y0") return s.com.y;
  if (name == "beta_left") return s.beta_left;
  if (name == "gamma_left") return s.gamma_left;
  if (name == "xcl") return s.ankle_left.x;
  if (name == "ycl") return s.ankle_left.y;
  if (name == "beta_right") return s.beta_right;
  if (name == "gamma_right") return s.gamma_right;
  if (name == "xcr") return s.ankle_right.x;
  if (name == "ycr") return s.ankle_right.y;
  throw WiringError("unknown signal '" + std::string(name) + "'");
}

}  // namespace hflc
