#include "tacsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "tacsim/episode.hpp"
#include "tacsim/errors.hpp"
#include "tacsim/policy.hpp"
#include "tacsim/rng.hpp"

namespace tacsim {

namespace {

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw DataError("expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Json frames_json(const StepResult& r, int episode, int step) {
  Json out = Json::array();
  auto add = [&](const char* pad, const char* stage, const TaxelFrame& f) {
    FrameRecord rec;
    rec.pad_id = pad;
    rec.resolution = Resolution::kPooled;
    rec.frame = f;
    rec.episode = episode;
    rec.step = step;
    rec.stage = stage;
    out.push_back(frame_to_json(rec));
  };
  add("left", "raw", r.raw.left);
  add("right", "raw", r.raw.right);
  add("left", "augmented", r.augmented.left);
  add("right", "augmented", r.augmented.right);
  return out;
}

std::string header_line(const Episode& ep, int index, const std::string& policy) {
  Json j;
  j["type"] = "header";
  j["version"] = TACSIM_VERSION;
  j["episode"] = index;
  j["seed"] = ep.seed();
  j["task"] = to_string(ep.scene().task);
  j["policy"] = policy;
  j["scene"] = to_json(ep.scene());
  j["dr"] = to_json(ep.dr());
  j["params_left"] = to_json(ep.params_left());
  j["params_right"] = to_json(ep.params_right());
  return j.dump();
}

std::string step_line(const Episode& ep, const StepResult& r, int index,
                      const Vec3* command) {
  Json j;
  j["type"] = command ? "step" : "reset";
  j["step"] = ep.steps();
  if (command) {
    j["command"] = vec_json(*command);
    j["action"] = vec_json(r.action);
  }
  j["hand_pos"] = vec_json(ep.state().hand_pos);
  j["peg_bottom"] = vec_json(peg_bottom(ep.state(), ep.scene()));
  j["reward"] = r.reward;
  j["done"] = r.done;
  j["success"] = r.success;
  j["termination"] = to_string(r.termination);
  if (!r.message.empty()) j["message"] = r.message;
  j["frames"] = frames_json(r, index, ep.steps());
  return j.dump();
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t root_seed, int index) {
  return derive_seed(root_seed, static_cast<std::uint64_t>(index));
}

std::string episode_log_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "episode_%04d.jsonl", index);
  return buf;
}

EpisodeSummary run_episode(const RunManifest& m, int index, std::string* log) {
  EpisodeSummary s;
  s.index = index;
  s.seed = episode_seed(m.root_seed, index);

  Episode ep(m.scene, m.dr, s.seed);
  auto policy = make_policy(m.policy);
  const StepResult* last = &ep.reset();
  policy->begin(s.seed, m.scene);

  auto emit = [&](const std::string& line) {
    if (log) {
      log->append(line);
      log->push_back('\n');
    }
  };
  if (log) {
    emit(header_line(ep, index, m.policy));
    emit(step_line(ep, *last, index, nullptr));
  }

  while (!last->done) {
    PolicyObservation obs;
    obs.pose = relative_pose(ep.state(), ep.scene());
    obs.raw = last->raw;
    obs.augmented = last->augmented;
    obs.step = ep.steps();
    const Vec3 command = policy->act(obs);
    last = &ep.step(command);
    s.total_reward += last->reward;
    if (log) emit(step_line(ep, *last, index, &command));
  }
  s.success = last->success;
  s.steps = ep.steps();
  s.termination = to_string(last->termination);
  return s;
}

RunSummary run_manifest(const RunManifest& m) {
  if (m.episodes < 0) throw ConfigError("episode count must be >= 0");
  m.scene.validate();
  m.dr.validate();
  // Fail on a bad policy spec before spawning workers.
  make_policy(m.policy);

  const bool write = !m.out_dir.empty();
  if (write) std::filesystem::create_directories(m.out_dir);

  RunSummary out;
  out.episodes.resize(static_cast<std::size_t>(m.episodes));
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= m.episodes) return;
      try {
        std::string log;
        out.episodes[static_cast<std::size_t>(i)] =
            run_episode(m, i, write ? &log : nullptr);
        if (write) {
          const auto path = std::filesystem::path(m.out_dir) / episode_log_name(i);
          std::ofstream f(path, std::ios::binary);
          f << log;
          if (!f) throw DataError("cannot write " + path.string());
        }
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next = m.episodes;
      }
    }
  };

  const int jobs = std::clamp(m.jobs, 1, std::max(1, m.episodes));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  int successes = 0;
  long steps = 0;
  for (const auto& e : out.episodes) {
    successes += e.success ? 1 : 0;
    steps += e.steps;
  }
  if (m.episodes > 0) {
    out.success_rate = static_cast<double>(successes) / m.episodes;
    out.mean_steps = static_cast<double>(steps) / m.episodes;
  }
  if (write) {
    std::ofstream f(std::filesystem::path(m.out_dir) / "summary.json",
                    std::ios::binary);
    f << to_json(out, m).dump(2) << '\n';
  }
  return out;
}

Json to_json(const RunSummary& s, const RunManifest& m) {
  Json j;
  j["version"] = TACSIM_VERSION;
  j["task"] = to_string(m.scene.task);
  j["policy"] = m.policy;
  j["root_seed"] = m.root_seed;
  j["episodes"] = s.episodes.size();
  j["success_rate"] = s.success_rate;
  j["mean_steps"] = s.mean_steps;
  Json per = Json::array();
  for (const auto& e : s.episodes) {
    Json r;
    r["index"] = e.index;
    r["seed"] = e.seed;
    r["success"] = e.success;
    r["steps"] = e.steps;
    r["return"] = e.total_reward;
    r["termination"] = e.termination;
    per.push_back(std::move(r));
  }
  j["per_episode"] = std::move(per);
  return j;
}

ReplayResult replay_log(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(line);
  }
  if (lines.size() < 2) throw DataError("episode log needs a header and a reset record");

  Json header;
  try {
    header = Json::parse(lines[0]);
  } catch (const Json::exception& e) {
    throw DataError(std::string("record 0: ") + e.what());
  }
  if (header.value("type", "") != "header")
    throw DataError("record 0: expected the header record");

  const int index = header.at("episode").get<int>();
  const std::string policy = header.at("policy").get<std::string>();
  Episode ep(scene_config_from_json(header.at("scene")),
             dr_config_from_json(header.at("dr")),
             header.at("seed").get<std::uint64_t>());

  ReplayResult res;
  std::vector<std::string> regenerated;
  const StepResult* last = &ep.reset();
  regenerated.push_back(header_line(ep, index, policy));
  regenerated.push_back(step_line(ep, *last, index, nullptr));
  for (std::size_t n = 2; n < lines.size(); ++n) {
    Json rec;
    try {
      rec = Json::parse(lines[n]);
    } catch (const Json::exception& e) {
      throw DataError("record " + std::to_string(n) + ": " + e.what());
    }
    if (last->done) {
      regenerated.push_back("<episode already finished>");
      break;
    }
    const Vec3 command = vec_from_json(rec.at("command"));
    last = &ep.step(command);
    regenerated.push_back(step_line(ep, *last, index, &command));
  }

  res.records = static_cast<int>(lines.size());
  for (std::size_t n = 0; n < std::max(lines.size(), regenerated.size()); ++n) {
    const bool same = n < lines.size() && n < regenerated.size() &&
                      lines[n] == regenerated[n];
    if (!same) {
      res.first_mismatch = static_cast<int>(n);
      res.detail = "record " + std::to_string(n) + " differs";
      return res;
    }
  }
  res.identical = true;
  return res;
}

ReplayResult replay_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return replay_log(ss.str());
}

}  // namespace tacsim
