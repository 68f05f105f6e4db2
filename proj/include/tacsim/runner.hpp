#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tacsim/augment.hpp"
#include "tacsim/frame_io.hpp"
#include "tacsim/scene.hpp"

namespace tacsim {

struct RunManifest {
  std::uint64_t root_seed = 0;
  SceneConfig scene = default_scene(TaskId::kRY2mm);
  DrConfig dr;
  std::string policy = "random";
  int episodes = 1;
  std::string out_dir;  // empty: nothing written
  int jobs = 1;
};

struct EpisodeSummary {
  int index = 0;
  std::uint64_t seed = 0;
  bool success = false;
  int steps = 0;
  double total_reward = 0.0;
  std::string termination;
};

struct RunSummary {
  std::vector<EpisodeSummary> episodes;  // by index
  double success_rate = 0.0;
  double mean_steps = 0.0;
};

// Episode i uses seed derive_seed(root_seed, i).
std::uint64_t episode_seed(std::uint64_t root_seed, int index);

// Runs one episode. When `log` is non-null the JSON-lines episode log is
// appended to it.
EpisodeSummary run_episode(const RunManifest& m, int index, std::string* log);

// Runs all episodes on up to `jobs` threads. Writes episode_NNNN.jsonl and
// summary.json into out_dir when set. Results do not depend on `jobs`.
RunSummary run_manifest(const RunManifest& m);

Json to_json(const RunSummary& s, const RunManifest& m);
std::string episode_log_name(int index);

struct ReplayResult {
  bool identical = false;
  int records = 0;
  int first_mismatch = -1;  // 0-based line, -1 when identical
  std::string detail;
};

// Re-simulates a log from its header and logged commands and compares every
// regenerated line against the file byte for byte.
ReplayResult replay_log(const std::string& text);
ReplayResult replay_log_file(const std::string& path);

}  // namespace tacsim
