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


// Command-line front end: gen-data | train | eval | sweep | surface | walk.
// Exit codes: 0 success, 1 usage or validation, 2 I/O, 3 numerical failure.

#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hflc/error.hpp"
#include "hflc/hierarchy.hpp"
#include "hflc/io.hpp"
#include "hflc/study.hpp"

namespace hflc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

inline io::RunConfig config_or_default(const std::string& path) {
  return path.empty() ? io::RunConfig{} : io::load_config(path);
}

inline std::string walk_log_csv(const std::vector<WalkRecord>& log) {
  std::string out =
      "t,x0_ref,y0_ref,x0_est,y0_est,beta_left,gamma_left,xcl,ycl,beta_right,gamma_right,xcr,ycr,"
      "iters,converged,residual\n";
  for (const WalkRecord& r : log) {
    const ChainState& s = r.signals;
    for (double v : {r.t, r.com_ref.x, r.com_ref.y, r.com_est.x, r.com_est.y, s.left.beta,
                     s.left.gamma, s.left.ankle.x, s.left.ankle.y, s.right.beta, s.right.gamma,
                     s.right.ankle.x, s.right.ankle.y}) {
      out += io::detail::fmt17(v);
      out += ',';
    }
    out += std::to_string(r.iterations) + "," + (r.converged ? "1" : "0") + "," +
           io::detail::fmt17(r.residual) + "\n";
  }
  return out;
}

inline std::size_t input_index(const ControllerSpec& spec, const std::string& token) {
  for (std::size_t k = 0; k < spec.input_signals.size(); ++k) {
    if (spec.input_signals[k] == token) return k;
  }
  std::size_t k = 0;
  if (io::detail::parse_number(token, k) && k < spec.input_signals.size()) return k;
  throw InvalidArgument(spec.id + " has no input '" + token + "'");
}

inline std::vector<GaitSample> read_dataset(const std::string& path) {
  std::vector<GaitSample> samples =
      with_context(path, [&] { return io::read_gait_csv(io::read_text_file(path)); });
  if (samples.empty()) throw InvalidArgument(path + ": dataset has no rows");
  return samples;
}

}  // namespace detail

struct GenDataArgs {
  std::string config;
  std::optional<int> n;
  std::optional<std::uint64_t> seed;
  std::string out;
};

inline int gen_data(const GenDataArgs& a, std::ostream& out) {
  const io::RunConfig cfg = detail::config_or_default(a.config);
  const int n = a.n.value_or(cfg.gait.n_samples);
  if (n < 2) throw InvalidArgument("n must be >= 2");
  const std::vector<GaitSample> samples =
      generate_dataset(cfg.params, cfg.gait, n, a.seed.value_or(cfg.gait.seed));
  io::write_text_file(a.out, io::write_gait_csv(samples));
  out << samples.size() << " rows written to " << a.out << "\n";
  return kExitOk;
}

struct TrainArgs {
  std::string config;
  std::string data;
  std::string out;
};

inline int train(const TrainArgs& a, std::ostream& out) {
  const io::RunConfig cfg = detail::config_or_default(a.config);
  const std::vector<GaitSample> samples = detail::read_dataset(a.data);
  const Hierarchy h = train_hierarchy(samples, cfg.train, cfg.params);
  io::save_model_file(a.out, h);
  out << "controller,output,signal,train_rmse\n";
  for (const HflcNode& n : h.nodes) {
    for (std::size_t o = 0; o < n.models.size(); ++o) {
      out << n.spec.id << "," << o << "," << n.spec.output_signals[o] << ","
          << io::detail::fmt17(n.models[o].train_rmse) << "\n";
    }
  }
  return kExitOk;
}

struct EvalArgs {
  std::string model;
  std::string data;
  std::string out;
};

inline int eval(const EvalArgs& a, std::ostream& out) {
  const Hierarchy h = io::load_model_file(a.model);
  const std::vector<GaitSample> samples = detail::read_dataset(a.data);
  const std::string table =
      export_error_table(score_hierarchy(h, samples, static_cast<int>(samples.size())));
  out << table;
  if (!a.out.empty()) io::write_text_file(a.out, table);
  return kExitOk;
}

struct SweepArgs {
  std::string config;
  std::string out_dir;
  std::string sizes;
};

inline int sweep(const SweepArgs& a, std::ostream& out) {
  io::RunConfig cfg = detail::config_or_default(a.config);
  if (!a.sizes.empty()) cfg.sizes = io::parse_int_list(a.sizes);
  const SweepConfig sc = cfg.sweep();
  sc.validate();
  const SweepResult res = run_sweep(sc);
  const std::filesystem::path dir(a.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  const std::string table = export_error_table(res);
  io::write_text_file(dir / "errors.csv", table);
  for (const auto& [size, h] : res.models) {
    io::save_model_file(dir / ("model_" + std::to_string(size) + ".json"), h);
  }
  out << table;
  return kExitOk;
}

struct SurfaceArgs {
  std::string model;
  std::string controller;
  std::size_t output_index = 0;
  std::string axes;
  std::vector<std::string> fixed;
  std::size_t resolution = 41;
  std::string out;
};

inline int surface(const SurfaceArgs& a, std::ostream& out) {
  const Hierarchy h = io::load_model_file(a.model);
  const HflcNode& node = h.node(a.controller);
  if (a.output_index >= node.models.size()) {
    throw InvalidArgument(a.controller + " has no output index " + std::to_string(a.output_index));
  }
  const TsFis& fis = node.models[a.output_index].fis;
  const std::vector<std::string_view> axes = io::detail::split(a.axes, ',');
  if (axes.size() != 2) throw InvalidArgument("--axes needs two comma-separated inputs");
  const std::size_t ai = detail::input_index(node.spec, std::string(io::detail::trim(axes[0])));
  const std::size_t aj = detail::input_index(node.spec, std::string(io::detail::trim(axes[1])));

  // unspecified inputs sit at the middle of their range
  std::vector<double> base;
  for (const InputSpec& in : fis.inputs) base.push_back(0.5 * (in.lo + in.hi));
  for (const std::string& kv : a.fixed) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--fixed expects name=value, got '" + kv + "'");
    const std::size_t k = detail::input_index(node.spec, kv.substr(0, eq));
    if (k == ai || k == aj) throw InvalidArgument("--fixed names an axis input: " + kv);
    if (!io::detail::parse_number(std::string_view(kv).substr(eq + 1), base[k])) {
      throw InvalidArgument("--fixed value is not a number: " + kv);
    }
  }
  const std::string csv = export_surface(fis, ai, aj, base, a.resolution);
  io::write_text_file(a.out, csv);
  out << a.resolution * a.resolution << " rows written to " << a.out << "\n";
  return kExitOk;
}

struct WalkArgs {
  std::string model;
  std::string config;
  int steps = 50;
  std::string out;
};

inline int walk(const WalkArgs& a, std::ostream& out) {
  const io::RunConfig cfg = detail::config_or_default(a.config);
  const Hierarchy h = io::load_model_file(a.model);
  const std::vector<WalkRecord> log = closed_loop_walk(h, cfg.gait, a.steps, cfg.max_iter, cfg.tol);
  if (!a.out.empty()) io::write_text_file(a.out, detail::walk_log_csv(log));
  const WalkSummary s = summarize(log);
  out << "phases: " << log.size() << "\n"
      << "mean_com_error: " << io::detail::fmt17(s.mean_com_error) << "\n"
      << "max_com_error: " << io::detail::fmt17(s.max_com_error) << "\n"
      << "convergence_rate: " << io::detail::fmt17(s.convergence_rate) << "\n";
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical neuro-fuzzy biped controller toolkit", "hflc"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* c_gen = app.add_subcommand("gen-data", "Generate a gait dataset CSV");
  c_gen->add_option("-c,--config", gen.config, "Config file")->check(CLI::ExistingFile);
  c_gen->add_option("--n", gen.n, "Number of samples");
  c_gen->add_option("--seed", gen.seed, "Sampling seed");
  c_gen->add_option("--out", gen.out, "Output CSV")->required();

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Train every controller of the hierarchy");
  c_train->add_option("-c,--config", tr.config, "Config file")->check(CLI::ExistingFile);
  c_train->add_option("--data", tr.data, "Training dataset CSV")->required()->check(CLI::ExistingFile);
  c_train->add_option("--out", tr.out, "Output model file")->required();

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Score a model file on a dataset");
  c_eval->add_option("--model", ev.model, "Model file")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--data", ev.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--out", ev.out, "Optional CSV copy of the table");

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep", "Training-set-size study");
  c_sweep->add_option("-c,--config", sw.config, "Config file")->check(CLI::ExistingFile);
  c_sweep->add_option("--out", sw.out_dir, "Output directory")->required();
  c_sweep->add_option("--sizes", sw.sizes, "Comma-separated training sizes (overrides config)");

  SurfaceArgs sf;
  auto* c_surf = app.add_subcommand("surface", "Export a controller response surface");
  c_surf->add_option("--model", sf.model, "Model file")->required()->check(CLI::ExistingFile);
  c_surf->add_option("--controller", sf.controller, "Controller id, e.g. HFLC1")->required();
  c_surf->add_option("--output-index", sf.output_index, "Output index of the controller");
  c_surf->add_option("--axes", sf.axes, "Two inputs, by name or index: i,j")->required();
  c_surf->add_option("--fixed", sf.fixed, "name=value for a non-axis input (repeatable)");
  c_surf->add_option("--resolution", sf.resolution, "Grid points per axis")
      ->check(CLI::Range(std::size_t{2}, std::size_t{10000}));
  c_surf->add_option("--out", sf.out, "Output CSV")->required();

  WalkArgs wk;
  auto* c_walk = app.add_subcommand("walk", "Closed-loop walk through the trained hierarchy");
  c_walk->add_option("--model", wk.model, "Model file")->required()->check(CLI::ExistingFile);
  c_walk->add_option("-c,--config", wk.config, "Config file")->check(CLI::ExistingFile);
  c_walk->add_option("--steps", wk.steps, "Number of phases")->check(CLI::PositiveNumber);
  c_walk->add_option("--out", wk.out, "Walk log CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_gen) return gen_data(gen, out);
    if (*c_train) return train(tr, out);
    if (*c_eval) return eval(ev, out);
    if (*c_sweep) return sweep(sw, out);
    if (*c_surf) return surface(sf, out);
    if (*c_walk) return walk(wk, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace hflc::cli
