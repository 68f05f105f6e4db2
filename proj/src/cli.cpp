#include "tacsim/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "tacsim/augment.hpp"
#include "tacsim/env.hpp"
#include "tacsim/errors.hpp"
#include "tacsim/frame_io.hpp"
#include "tacsim/render.hpp"
#include "tacsim/rng.hpp"
#include "tacsim/runner.hpp"

namespace tacsim {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string config;  // DR config file
  std::string out;
  int jobs = 1;
};

DrConfig read_dr(const std::string& path) {
  if (path.empty()) return {};
  if (!std::filesystem::exists(path))
    throw UsageError("config file not found: " + path);
  return load_dr_config(path);
}

// Writes to a file, or to `fallback` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  f << text;
}

int cmd_surface(const Globals& g, bool no_g, std::ostream& out) {
  const DrConfig dr = read_dr(g.config);
  dr.validate();
  SurfaceProfile s;
  if (no_g || !dr.enable_g) {
    s = flat_surface(dr.nominal_depth);
  } else {
    Rng rng(g.seed);
    s = build_surface(rng, dr);
  }
  Json j;
  j["type"] = "surface";
  j["seed"] = g.seed;
  j["surface"] = to_json(s);
  emit(g.out, j.dump() + "\n", out);
  return kExitOk;
}

int cmd_run(const Globals& g, const std::string& task, int episodes,
            const std::string& policy, const std::string& scene_path,
            std::ostream& out) {
  RunManifest m;
  try {
    m.scene = default_scene(task_from_string(task));
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (!scene_path.empty()) {
    if (!std::filesystem::exists(scene_path))
      throw UsageError("scene config not found: " + scene_path);
    m.scene = load_scene_config(scene_path);
    if (m.scene.task != task_from_string(task))
      throw ConfigError("scene config is for task " + to_string(m.scene.task));
  }
  m.dr = read_dr(g.config);
  m.root_seed = g.seed;
  m.policy = policy;
  m.episodes = episodes;
  m.out_dir = g.out.empty() ? "run" : g.out;
  m.jobs = g.jobs;
  const RunSummary s = run_manifest(m);
  out << "task " << task << ": " << s.episodes.size() << " episodes, success rate "
      << s.success_rate << ", mean steps " << s.mean_steps << " -> "
      << m.out_dir << "\n";
  return kExitOk;
}

int cmd_augment(const Globals& g, const std::string& in_path, std::ostream& out) {
  const DrConfig dr = read_dr(g.config);
  dr.validate();
  const auto records = read_frame_file(in_path);
  std::map<std::pair<std::int64_t, bool>, AugmentParams> params;
  std::vector<std::pair<std::int64_t, bool>> order;
  std::string text;
  for (std::size_t m = 0; m < records.size(); ++m) {
    const FrameRecord& rec = records[m];
    if (rec.resolution != Resolution::kPooled || !rec.frame.is_shape(6, 5))
      throw DataError("record " + std::to_string(m) +
                      ": resolution mismatch, expected pooled 6x5 frame, got " +
                      to_string(rec.resolution));
    if (rec.pad_id != "left" && rec.pad_id != "right")
      throw DataError("record " + std::to_string(m) + ": unknown pad id '" +
                      rec.pad_id + "'");
    const std::int64_t episode = rec.episode.value_or(static_cast<std::int64_t>(m));
    const bool right = rec.pad_id == "right";
    const auto key = std::make_pair(episode, right);
    auto it = params.find(key);
    if (it == params.end()) {
      it = params.emplace(key, stream_params(dr, g.seed, episode, right)).first;
      order.push_back(key);
    }
    FrameRecord o = rec;
    o.frame = augment_frame(rec.frame, it->second);
    o.stage = "augmented";
    text += frame_to_json(o).dump();
    text += '\n';
  }
  emit(g.out, text, out);

  if (!g.out.empty()) {
    std::string side;
    for (const auto& key : order) {
      Json j;
      j["episode"] = key.first;
      j["pad_id"] = key.second ? "right" : "left";
      j["seed"] = g.seed;
      j["params"] = to_json(params.at(key));
      side += j.dump();
      side += '\n';
    }
    emit(g.out + ".params.jsonl", side, out);
  }
  return kExitOk;
}

int cmd_render(const Globals& g, const std::string& in_path, double normal_scale,
               std::ostream& out) {
  const auto records = read_frame_file(in_path);
  const std::string dir = g.out.empty() ? "render" : g.out;
  std::filesystem::create_directories(dir);
  RenderOptions o;
  o.normal_scale = normal_scale;
  for (std::size_t m = 0; m < records.size(); ++m) {
    char name[64];
    std::snprintf(name, sizeof name, "frame_%05zu_%s.svg", m,
                  records[m].pad_id.c_str());
    emit((std::filesystem::path(dir) / name).string(), render_svg(records[m], o), out);
  }
  out << records.size() << " frames rendered to " << dir << "\n";
  return kExitOk;
}

struct Moments {
  double sum = 0.0, sum_sq = 0.0;
  double min = INFINITY, max = -INFINITY;
  long n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    min = std::min(min, v);
    max = std::max(max, v);
    ++n;
  }
  Json to_json() const {
    const double mean = sum / static_cast<double>(n);
    // Population variance; a single draw reports std 0.
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
    Json j;
    j["mean"] = n == 1 ? min : mean;
    j["std"] = n == 1 ? 0.0 : std::sqrt(var);
    j["min"] = min;
    j["max"] = max;
    return j;
  }
};

int cmd_stats(const Globals& g, long samples, std::ostream& out) {
  if (samples < 1) throw UsageError("--samples must be >= 1");
  const DrConfig dr = read_dr(g.config);
  dr.validate();
  Rng rng(g.seed);
  std::map<std::string, Moments> m;
  const char* names[] = {"alpha_x", "alpha_y", "alpha_z", "beta", "c_x", "c_y",
                         "bump_mean_row", "bump_mean_col", "bump_dev_row",
                         "bump_dev_col"};
  long dropped = 0, taxels = 0;
  for (long n = 0; n < samples; ++n) {
    const AugmentParams p = sample_augment_params(rng, dr);
    for (int a = 0; a < 3; ++a) m[names[a]].add(p.scaling.axis_scale[a]);
    for (double b : p.scaling.taxel_scale.values()) m["beta"].add(b);
    for (auto d : p.scaling.dropout_mask.values()) dropped += d;
    taxels += static_cast<long>(p.scaling.dropout_mask.values().size());
    m["c_x"].add(p.conv_gain[0]);
    m["c_y"].add(p.conv_gain[1]);
    m["bump_mean_row"].add(p.surface.bump_mean[0]);
    m["bump_mean_col"].add(p.surface.bump_mean[1]);
    m["bump_dev_row"].add(p.surface.bump_dev[0]);
    m["bump_dev_col"].add(p.surface.bump_dev[1]);
  }
  Json j;
  j["type"] = "dr_stats";
  j["samples"] = samples;
  j["seed"] = g.seed;
  Json ps;
  for (const char* name : names) ps[name] = m[name].to_json();
  j["params"] = std::move(ps);
  j["dropout_fraction"] = static_cast<double>(dropped) / static_cast<double>(taxels);
  emit(g.out, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_replay(const std::vector<std::string>& logs, std::ostream& out) {
  int rc = kExitOk;
  for (const auto& path : logs) {
    const ReplayResult r = replay_log_file(path);
    out << path << ": " << (r.identical ? "identical" : "MISMATCH " + r.detail)
        << " (" << r.records << " records)\n";
    if (!r.identical) rc = kExitData;
  }
  return rc;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Tactile insertion simulator and sim-to-real augmentation tools",
               "tacsim"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "root seed");
  app.add_option("--config", g.config, "augmentation (DR) config file, JSON");
  app.add_option("--out", g.out, "output file or directory");
  app.add_option("--jobs", g.jobs, "worker threads for run")
      ->check(CLI::PositiveNumber);

  auto* surface = app.add_subcommand("surface", "sample one sensor surface profile");
  bool no_g = false;
  surface->add_flag("--no-g", no_g, "flat surface at the nominal depth");

  auto* run = app.add_subcommand("run", "run episodes with a scripted or random policy");
  std::string task, policy = "random", scene_path;
  int episodes = 1;
  run->add_option("--task", task, "task id")->required();
  run->add_option("--episodes", episodes, "episode count")->check(CLI::NonNegativeNumber);
  run->add_option("--policy", policy, "random, search or file:<actions.json>");
  run->add_option("--scene-config", scene_path, "scene config file, JSON");

  auto* augment = app.add_subcommand("augment", "augment a recorded frame stream");
  std::string in_path;
  augment->add_option("--in", in_path, "input frame records (JSON lines)")->required();

  auto* render = app.add_subcommand("render", "render frames to SVG");
  double normal_scale = RenderOptions{}.normal_scale;
  render->add_option("--in", in_path, "input frame records")->required();
  render->add_option("--normal-scale", normal_scale, "N that saturates a cell")
      ->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "empirical DR parameter statistics");
  long samples = 100000;
  stats->add_option("--samples", samples, "number of draws");

  auto* replay = app.add_subcommand("replay", "re-simulate logs and compare byte for byte");
  std::vector<std::string> logs;
  replay->add_option("logs", logs, "episode log files")->required();

  for (auto* sub : {surface, run, augment, render, stats, replay}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 prints help and version through these streams.
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*surface) return cmd_surface(g, no_g, out);
    if (*run) return cmd_run(g, task, episodes, policy, scene_path, out);
    if (*augment) return cmd_augment(g, in_path, out);
    if (*render) return cmd_render(g, in_path, normal_scale, out);
    if (*stats) return cmd_stats(g, samples, out);
    if (*replay) return cmd_replay(logs, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SingularParameterError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ShapeError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IndexError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace tacsim
