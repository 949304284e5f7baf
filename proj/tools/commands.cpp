// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <CLI11.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>

#include "rlsp/ablation.hpp"
#include "rlsp/checkpoint.hpp"
#include "rlsp/dataset.hpp"
#include "rlsp/degrade.hpp"
#include "rlsp/error.hpp"
#include "rlsp/evaluation.hpp"
#include "rlsp/image_io.hpp"
#include "rlsp/parallel.hpp"
#include "rlsp/run_config.hpp"
#include "rlsp/training.hpp"

namespace fs = std::filesystem;

namespace rlsp::cli {
namespace {

struct ConfigFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::int64_t> max_iters;
  std::vector<std::string> overrides;

  void attach(CLI::App* app, bool training) {
    app->add_option("--config", config_path, "key = value config file");
    app->add_option("--threads", threads, "Worker threads (0 = default)");
    if (training) {
      app->add_option("--seed", seed, "Seed for every random choice");
      app->add_option("--max-iters", max_iters, "Total training iterations");
    }
    app->add_option("overrides", overrides, "key=value config overrides");
  }
};

/// Config file, then positional overrides, then dedicated flags. Echoes the result.
RunConfig resolve(const ConfigFlags& flags, std::ostream& out) {
  RunConfig rc;
  try {
    if (!flags.config_path.empty()) {
      if (!fs::exists(flags.config_path)) {
        throw UsageError("config file not found: " + flags.config_path);
      }
      rc = RunConfig::load(flags.config_path);
    }
    for (const auto& o : flags.overrides) rc.apply_override(o);
    if (flags.seed) rc.train.seed = *flags.seed;
    if (flags.threads) rc.threads = *flags.threads;
    if (flags.max_iters) rc.train.max_iters = *flags.max_iters;
    rc.validate();
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }
  set_num_threads(rc.threads);
  out << "# resolved config\n" << rc.to_text() << std::flush;
  return rc;
}

void require_dir(const fs::path& p, const char* what) {
  if (!fs::is_directory(p)) throw UsageError(std::string(what) + " not found: " + p.string());
}

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw UsageError(std::string(what) + " not found: " + p.string());
}

struct NamedClip {
  std::string name;
  VideoClip clip;
};

/// A directory holding PNG frames is one sequence; otherwise each subdirectory is one.
std::vector<NamedClip> load_sequences(const fs::path& dir) {
  std::vector<NamedClip> out;
  const auto subdirs = list_sequence_dirs(dir);
  if (subdirs.empty()) {
    out.push_back({dir.filename().string(), load_sequence(dir)});
  } else {
    for (const auto& d : subdirs) out.push_back({d.filename().string(), load_sequence(d)});
  }
  return out;
}

/// `root/train` and `root/val` when present, otherwise every sequence under root trains.
void load_split(const fs::path& root, std::vector<VideoClip>& train, std::vector<VideoClip>& val) {
  require_dir(root, "data directory");
  if (fs::is_directory(root / "train")) {
    train = load_dataset(root / "train");
    if (fs::is_directory(root / "val")) val = load_dataset(root / "val");
  } else {
    train = load_dataset(root);
  }
}

template <typename Fn>
void write_to(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot open " + path + " for writing");
  fn(file);
  if (!file) throw IoError("write failed: " + path);
}

Checkpoint load_model(const fs::path& path) {
  require_file(path, "checkpoint");
  return load_checkpoint(path);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  ConfigFlags flags;
  std::string data;
  std::string out;
  std::string log;
  std::string resume;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const RunConfig rc = resolve(a.flags, out);
  std::vector<VideoClip> train_set, val_set;
  load_split(a.data, train_set, val_set);
  out << "# " << describe(rc.cell) << ", " << train_set.size() << " training / " << val_set.size()
      << " validation sequences\n";

  Trainer trainer(rc.cell, rc.train, rc.degrade, std::move(train_set), std::move(val_set));
  bool append_log = false;
  if (!a.resume.empty()) {
    Checkpoint ck = load_model(a.resume);
    if (!(ck.config == rc.cell)) {
      throw UsageError("checkpoint " + a.resume + " holds " + describe(ck.config) +
                       " with different flags than the resolved config");
    }
    if (!ck.adam) throw UsageError("checkpoint " + a.resume + " has no optimizer state");
    trainer.resume(std::move(ck.weights), std::move(*ck.adam));
    append_log = true;
    out << "# resumed at iteration " << trainer.iteration() << '\n';
  }

  const std::string log_path = a.log.empty() ? a.out + ".log.csv" : a.log;
  const bool header = !append_log || !fs::exists(log_path);
  std::ofstream log(log_path, append_log ? std::ios::app : std::ios::trunc);
  if (!log) throw IoError("cannot open " + log_path + " for writing");
  if (header) log << "iteration,train_mse,val_mse,val_psnr_db,lr\n";

  const auto& tc = trainer.train_config();
  while (!trainer.done()) {
    const LossReport r = trainer.step();
    const bool validated = r.val_mse.has_value();
    if (r.iteration % tc.log_every == 0 || validated || trainer.done()) {
      log << r.iteration << ',' << fmt("%.9g", r.train_mse) << ','
          << (validated ? fmt("%.9g", *r.val_mse) : "") << ','
          << (validated ? format_psnr(*r.val_psnr) : "") << ',' << fmt("%.3g", r.lr) << '\n';
      log.flush();
      out << "iter " << r.iteration << "  train_mse " << fmt("%.6g", r.train_mse);
      if (validated) out << "  val_psnr " << format_psnr(*r.val_psnr) << " dB";
      out << '\n';
    }
    if (validated) save_checkpoint(a.out, rc.cell, trainer.weights(), &trainer.adam());
  }
  save_checkpoint(a.out, rc.cell, trainer.weights(), &trainer.adam());
  out << "# wrote " << a.out << '\n';
  if (trainer.best_moving_average()) {
    save_checkpoint(a.out + ".best", rc.cell, trainer.best_weights());
    out << "# wrote " << a.out << ".best (moving-average validation MSE "
        << fmt("%.6g", *trainer.best_moving_average()) << ")\n";
  }
  return kExitOk;
}

// --- infer -----------------------------------------------------------------

struct InferArgs {
  std::string checkpoint;
  std::string input;
  std::string out;
  std::string luma_out;
  std::optional<int> threads;
};

int cmd_infer(const InferArgs& a, std::ostream& out) {
  if (a.threads) set_num_threads(*a.threads);
  require_dir(a.input, "input directory");
  const Checkpoint ck = load_model(a.checkpoint);
  const VideoClip lr = load_sequence(a.input);
  if (lr.color_space != ColorSpace::kRgb) throw UsageError("input frames must be RGB: " + a.input);
  const InferenceResult result = infer_sequence(lr, ck.weights, ck.config);
  save_sequence(result.rgb, a.out);
  if (!a.luma_out.empty()) save_sequence(result.luma, a.luma_out);
  out << "wrote " << result.rgb.size() << " frames of " << result.rgb.width() << 'x'
      << result.rgb.height() << " to " << a.out << '\n';
  if (result.clamping.clamped_fraction() > 0.01) {
    out << "warning: " << fmt("%.2f", 100.0 * result.clamping.clamped_fraction())
        << "% of RGB samples were clamped\n";
  }
  return kExitOk;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  ConfigFlags flags;
  std::string output;
  std::string reference;
  std::string checkpoint;
  std::string hr;
  std::string out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  std::vector<std::string> names;
  std::vector<SequenceResult> results;

  if (!a.checkpoint.empty()) {
    if (a.hr.empty()) throw UsageError("--checkpoint needs --hr");
    RunConfig rc = resolve(a.flags, out);
    const Checkpoint ck = load_model(a.checkpoint);
    rc.degrade.scale = ck.config.scale;
    require_dir(a.hr, "ground-truth directory");
    std::vector<double> bicubic;
    for (auto& [name, hr] : load_sequences(a.hr)) {
      const VideoClip lr = degrade(hr, rc.degrade);
      const InferenceResult inf = infer_sequence(lr, ck.weights, ck.config);
      const VideoClip truth = luma(hr);
      names.push_back(name);
      results.push_back(psnr_sequence(inf.luma.frames, truth.frames));
      std::vector<Tensor> base;
      for (const auto& f : lr.frames) base.push_back(bicubic_upscale(rgb_to_y(f), ck.config.scale));
      bicubic.push_back(psnr_sequence(base, truth.frames).sequence_psnr);
      out << name << ": " << format_psnr(results.back().sequence_psnr) << " dB (bicubic "
          << format_psnr(bicubic.back()) << " dB)\n";
    }
  } else {
    if (a.output.empty() || a.reference.empty()) {
      throw UsageError("eval needs --output and --reference, or --checkpoint and --hr");
    }
    if (a.flags.threads) set_num_threads(*a.flags.threads);
    require_dir(a.output, "output directory");
    require_dir(a.reference, "reference directory");
    const auto outputs = load_sequences(a.output);
    const auto refs = load_sequences(a.reference);
    std::map<std::string, const VideoClip*> by_name;
    for (const auto& r : refs) by_name[r.name] = &r.clip;
    for (const auto& o : outputs) {
      const VideoClip* ref = nullptr;
      if (outputs.size() == 1 && refs.size() == 1) {
        ref = &refs.front().clip;
      } else if (auto it = by_name.find(o.name); it != by_name.end()) {
        ref = it->second;
      } else {
        throw IoError("no reference sequence named " + o.name);
      }
      if (o.clip.size() != ref->size()) {
        throw IoError("sequence " + o.name + ": output has " + std::to_string(o.clip.size()) +
                      " frames, reference has " + std::to_string(ref->size()));
      }
      names.push_back(o.name);
      results.push_back(psnr_sequence(luma(o.clip).frames, luma(*ref).frames));
    }
  }

  std::vector<double> seq;
  for (const auto& r : results) seq.push_back(r.sequence_psnr);
  write_to(a.out, out, [&](std::ostream& os) { write_eval_csv(os, names, results); });
  const auto mean = mean_finite(seq);
  out << "mean sequence PSNR: " << (mean ? format_psnr(*mean) : std::string("inf")) << " dB\n";
  return kExitOk;
}

// --- ablate ----------------------------------------------------------------

struct AblateArgs {
  ConfigFlags flags;
  std::string data;
  std::string out;
  double budget_seconds = 0.0;
};

int cmd_ablate(const AblateArgs& a, std::ostream& out) {
  const RunConfig rc = resolve(a.flags, out);
  std::vector<VideoClip> train_set, val_set;
  load_split(a.data, train_set, val_set);
  if (val_set.empty()) throw UsageError("ablate needs a validation split: " + a.data + "/val");
  const auto rows = run_ablation(
      rc.cell.layers, rc.cell.filters, rc.train, rc.degrade, train_set, val_set,
      AblationBudget{a.budget_seconds}, [&](const AblationRow& row, const LossReport& r) {
        if (r.iteration % rc.train.log_every == 0) {
          out << row.label << "  iter " << r.iteration << "  train_mse "
              << fmt("%.6g", r.train_mse) << '\n';
        }
      });
  for (const auto& row : rows) {
    out << row.label << ": " << fmt("%.3f", row.val_psnr_db) << " dB after " << row.iterations
        << " iterations\n";
  }
  write_to(a.out, out, [&](std::ostream& os) { write_ablation_csv(os, rows); });
  return kExitOk;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  ConfigFlags flags;
  std::string checkpoint;
  std::vector<std::string> models;
  std::vector<std::string> resolutions;
  int warmup = 2;
  int reps = 10;
  std::string out;
};

std::pair<int, int> parse_pair(const std::string& text, char sep, const char* what) {
  const auto pos = text.find(sep);
  try {
    if (pos == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const int a = std::stoi(text.substr(0, pos), &used);
    if (used != pos) throw std::invalid_argument(text);
    const std::string rest = text.substr(pos + 1);
    const int b = std::stoi(rest, &used);
    if (used != rest.size() || a < 1 || b < 1) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::exception&) {
    throw UsageError(std::string("bad ") + what + " '" + text + "'");
  }
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const RunConfig rc = resolve(a.flags, out);
  std::vector<std::pair<CellConfig, CellWeights>> models;
  if (!a.checkpoint.empty()) {
    Checkpoint ck = load_model(a.checkpoint);
    models.emplace_back(ck.config, std::move(ck.weights));
  } else {
    std::vector<CellConfig> configs;
    if (a.models.empty()) configs.push_back(rc.cell);
    for (const auto& m : a.models) {
      CellConfig c = rc.cell;
      std::tie(c.layers, c.filters) = parse_pair(m, '-', "model (want n-f)");
      configs.push_back(c);
    }
    std::mt19937_64 rng(rc.train.seed);
    for (const auto& c : configs) {
      try {
        c.validate();
      } catch (const ShapeError& e) {
        throw UsageError(e.what());
      }
      models.emplace_back(c, xavier_init(c, rng));
    }
  }
  std::vector<std::pair<int, int>> sizes;  // (H, W)
  for (const auto& r : a.resolutions) {
    const auto [w, h] = parse_pair(r, 'x', "resolution (want WxH)");
    sizes.emplace_back(h, w);
  }
  if (sizes.empty()) sizes.emplace_back(270, 480);  // LR input of a 1920x1080 output at r=4

  out << "# " << hardware_description() << '\n';
  write_to(a.out, out, [&](std::ostream& os) {
    write_bench_header(os);
    for (const auto& [config, weights] : models) {
      for (const auto& [h, w] : sizes) {
        const BenchmarkResult r = runtime_benchmark(h, w, weights, config, a.warmup, a.reps);
        write_bench_row(os, r, describe(config));
        os.flush();
      }
    }
  });
  return kExitOk;
}

// --- profile ---------------------------------------------------------------

struct ProfileArgs {
  std::string input;
  std::string checkpoint;
  int row = 0;
  std::string out;
  std::optional<int> threads;
};

int cmd_profile(const ProfileArgs& a, std::ostream& out) {
  if (a.threads) set_num_threads(*a.threads);
  require_dir(a.input, "input directory");
  VideoClip clip = load_sequence(a.input);
  if (!a.checkpoint.empty()) {
    const Checkpoint ck = load_model(a.checkpoint);
    clip = infer_sequence(clip, ck.weights, ck.config).luma;
  }
  const TemporalProfile p = temporal_profile(clip, a.row);
  const fs::path path(a.out);
  if (path.extension() == ".pgm") {
    save_pgm(p.image.channels() == 1 ? p.image : rgb_to_y(p.image), path);
  } else {
    save_png(p.image, path);
  }
  out << "wrote " << p.image.height() << 'x' << p.image.width() << " profile of row " << a.row
      << " to " << a.out << '\n';
  return kExitOk;
}

// --- flow ------------------------------------------------------------------

struct FlowArgs {
  ConfigFlags flags;
  std::string checkpoint;
  std::string hr;
  int offset = 0;
  double threshold = 0.05;
  std::string out;
};

int cmd_flow(const FlowArgs& a, std::ostream& out) {
  RunConfig rc = resolve(a.flags, out);
  const Checkpoint ck = load_model(a.checkpoint);
  rc.degrade.scale = ck.config.scale;
  require_dir(a.hr, "ground-truth directory");
  const VideoClip hr = load_sequence(a.hr);
  const VideoClip lr = degrade(hr, rc.degrade);
  const FlowExperimentResult r =
      information_flow_experiment(lr, luma(hr), ck.weights, ck.config, a.offset, a.threshold);
  const auto smooth = moving_average(r.diff_db, 5);
  write_to(a.out, out, [&](std::ostream& os) {
    os << "frame,warm_psnr_db,cold_psnr_db,diff_db,diff_ma5_db\n";
    for (std::size_t i = 0; i < r.diff_db.size(); ++i) {
      os << r.offset + static_cast<int>(i) << ',' << format_psnr(r.warm_psnr[i]) << ','
         << format_psnr(r.cold_psnr[i]) << ',' << fmt("%.6f", r.diff_db[i]) << ','
         << fmt("%.6f", smooth[i]) << '\n';
    }
  });
  if (r.convergence_index) {
    out << "converged below " << a.threshold << " dB at frame "
        << r.offset + static_cast<int>(*r.convergence_index) << '\n';
  } else {
    out << "did not converge below " << a.threshold << " dB\n";
  }
  return kExitOk;
}

// --- degrade / synth -------------------------------------------------------

struct DegradeArgs {
  ConfigFlags flags;
  std::string input;
  std::string out;
};

int cmd_degrade(const DegradeArgs& a, std::ostream& out) {
  const RunConfig rc = resolve(a.flags, out);
  require_dir(a.input, "input directory");
  const VideoClip lr = degrade(load_sequence(a.input), rc.degrade);
  save_sequence(lr, a.out);
  out << "wrote " << lr.size() << " frames of " << lr.width() << 'x' << lr.height() << " to "
      << a.out << '\n';
  return kExitOk;
}

struct SynthArgs {
  std::string out;
  int train = 8;
  int val = 2;
  int frames = 20;
  int height = 64;
  int width = 64;
  std::uint64_t seed = 1;
  double max_frequency = TextureSpec{}.max_frequency;
  double contrast = TextureSpec{}.contrast;
  std::vector<double> velocity;  // empty or {vx, vy}
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  TextureSpec spec;
  spec.frames = a.frames;
  spec.height = a.height;
  spec.width = a.width;
  spec.max_frequency = a.max_frequency;
  spec.contrast = a.contrast;
  if (!a.velocity.empty()) spec.velocity = std::array<double, 2>{a.velocity[0], a.velocity[1]};
  const auto write_split = [&](const char* split, int count, std::uint64_t seed) {
    const auto clips = make_texture_dataset(spec, count, seed);
    for (std::size_t i = 0; i < clips.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "seq%03zu", i);
      save_sequence(clips[i], fs::path(a.out) / split / name);
    }
  };
  write_split("train", a.train, a.seed);
  if (a.val > 0) write_split("val", a.val, a.seed + 0x9e3779b97f4a7c15ULL);
  out << "wrote " << a.train << " training and " << a.val << " validation sequences to " << a.out
      << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"RLSP video super-resolution toolkit", "rlsp"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a cell on HR sequences");
  train.flags.attach(t, true);
  t->add_option("--data", train.data, "Dataset root (train/ and val/, or sequence dirs)")
      ->required();
  t->add_option("--out", train.out, "Checkpoint path")->required();
  t->add_option("--log", train.log, "Loss log CSV (default <out>.log.csv)");
  t->add_option("--resume", train.resume, "Continue from a checkpoint with optimizer state");

  InferArgs infer;
  auto* i = app.add_subcommand("infer", "Super-resolve an LR RGB sequence");
  i->add_option("--checkpoint", infer.checkpoint)->required();
  i->add_option("--input", infer.input, "Directory of LR PNG frames")->required();
  i->add_option("--out", infer.out, "Output directory for HR RGB frames")->required();
  i->add_option("--luma-out", infer.luma_out, "Also write the super-resolved Y frames here");
  i->add_option("--threads", infer.threads);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Video PSNR on the Y channel");
  eval.flags.attach(e, false);
  e->add_option("--output", eval.output, "Super-resolved sequence(s)");
  e->add_option("--reference", eval.reference, "Ground-truth sequence(s)");
  e->add_option("--checkpoint", eval.checkpoint, "Degrade --hr, infer and score");
  e->add_option("--hr", eval.hr, "HR ground-truth sequence(s) for --checkpoint");
  e->add_option("--out", eval.out, "CSV report (default stdout)");

  AblateArgs ablate;
  auto* ab = app.add_subcommand("ablate", "Train and score the four input-set variants");
  ablate.flags.attach(ab, true);
  ab->add_option("--data", ablate.data, "Dataset root with train/ and val/")->required();
  ab->add_option("--out", ablate.out, "CSV report (default stdout)");
  ab->add_option("--budget-seconds", ablate.budget_seconds,
                 "Wall-time cap per variant (0 = iterations only)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time cell_forward per frame");
  bench.flags.attach(b, false);
  b->add_option("--checkpoint", bench.checkpoint, "Benchmark these weights");
  b->add_option("--model", bench.models, "n-f, repeatable (random weights)");
  b->add_option("--resolution", bench.resolutions, "LR WxH, repeatable (default 480x270)");
  b->add_option("--warmup", bench.warmup)->check(CLI::NonNegativeNumber);
  b->add_option("--reps", bench.reps)->check(CLI::PositiveNumber);
  b->add_option("--out", bench.out, "CSV report (default stdout)");

  ProfileArgs profile;
  auto* p = app.add_subcommand("profile", "Stack one pixel row of every frame");
  p->add_option("--input", profile.input, "Sequence directory")->required();
  p->add_option("--checkpoint", profile.checkpoint, "Treat --input as LR and profile the output");
  p->add_option("--row", profile.row)->required();
  p->add_option("--out", profile.out, "Image path (.png or .pgm)")->required();
  p->add_option("--threads", profile.threads);

  FlowArgs flow;
  auto* f = app.add_subcommand("flow", "Warm versus cold start on one HR sequence");
  flow.flags.attach(f, false);
  f->add_option("--checkpoint", flow.checkpoint)->required();
  f->add_option("--hr", flow.hr, "HR sequence directory")->required();
  f->add_option("--offset", flow.offset, "Frame where the cold run starts")->required();
  f->add_option("--threshold", flow.threshold, "Convergence threshold in dB");
  f->add_option("--out", flow.out, "CSV report (default stdout)");

  DegradeArgs deg;
  auto* d = app.add_subcommand("degrade", "Blur and decimate an HR sequence");
  deg.flags.attach(d, false);
  d->add_option("--input", deg.input)->required();
  d->add_option("--out", deg.out)->required();

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a translating-texture dataset");
  s->add_option("--out", synth.out)->required();
  s->add_option("--train", synth.train)->check(CLI::PositiveNumber);
  s->add_option("--val", synth.val)->check(CLI::NonNegativeNumber);
  s->add_option("--frames", synth.frames)->check(CLI::PositiveNumber);
  s->add_option("--height", synth.height)->check(CLI::PositiveNumber);
  s->add_option("--width", synth.width)->check(CLI::PositiveNumber);
  s->add_option("--seed", synth.seed);
  s->add_option("--max-frequency", synth.max_frequency, "Highest wave frequency, cycles per HR pixel")
      ->check(CLI::PositiveNumber);
  s->add_option("--contrast", synth.contrast, "Edge sharpness of the soft threshold")
      ->check(CLI::PositiveNumber);
  s->add_option("--velocity", synth.velocity, "Shared motion VX VY in HR pixels per frame")
      ->expected(2);

  std::vector<const char*> argv{"rlsp"};
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*t) return cmd_train(train, out);
    if (*i) return cmd_infer(infer, out);
    if (*e) return cmd_eval(eval, out);
    if (*ab) return cmd_ablate(ablate, out);
    if (*b) return cmd_bench(bench, out);
    if (*p) return cmd_profile(profile, out);
    if (*f) return cmd_flow(flow, out);
    if (*d) return cmd_degrade(deg, out);
    if (*s) return cmd_synth(synth, out);
  } catch (const UsageError& ex) {
    err << "rlsp: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "rlsp: " << ex.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rlsp::cli
