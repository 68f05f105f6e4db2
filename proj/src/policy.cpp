#include "tacsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tacsim/errors.hpp"
#include "tacsim/features.hpp"

namespace tacsim {

void RandomPolicy::begin(std::uint64_t episode_seed, const SceneConfig& scene) {
  rng_ = std::make_unique<Rng>(derive_seed(episode_seed, 1));
  bound_ = scene.action_bound;
}

Vec3 RandomPolicy::act(const PolicyObservation&) {
  if (!rng_) throw LifecycleError("policy used before begin()");
  Vec3 a;
  for (int k = 0; k < 3; ++k) a[k] = rng_->uniform(-bound_, bound_);
  return a;
}

ScriptedPolicy::ScriptedPolicy(std::vector<Vec3> actions)
    : actions_(std::move(actions)) {}

ScriptedPolicy ScriptedPolicy::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open action file " + path);
  std::vector<Vec3> actions;
  try {
    const Json j = Json::parse(in);
    for (const auto& a : j) {
      const auto v = a.get<std::vector<double>>();
      if (v.size() != 3) throw ConfigError("actions must be [dx, dy, dz]");
      actions.emplace_back(v[0], v[1], v[2]);
    }
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return ScriptedPolicy(std::move(actions));
}

void ScriptedPolicy::begin(std::uint64_t, const SceneConfig&) { next_ = 0; }

Vec3 ScriptedPolicy::act(const PolicyObservation&) {
  if (next_ >= actions_.size()) return Vec3::Zero();
  return actions_[next_++];
}

void SearchPolicy::begin(std::uint64_t, const SceneConfig& scene) {
  scene_ = scene;
  have_baseline_ = false;
  aligned_ = false;
}

SearchPolicy::Signature SearchPolicy::signature(const PadFrames& f) {
  Signature s;
  const auto l = f.left.totals();
  const auto r = f.right.totals();
  s.vertical = l[1] + r[1];
  s.lateral_x = l[0] - r[0];
  s.lateral_y = l[2] - r[2];
  s.curl_left = shear_rotation(f.left);
  s.centroid_left = normal_centroid(f.left).y();
  return s;
}

Vec3 SearchPolicy::act(const PolicyObservation& obs) {
  const double bound = scene_.action_bound;
  auto clip = [bound](double v) { return std::clamp(v, -bound, bound); };
  const Signature now = signature(obs.raw);

  if (!aligned_) {
    // The hand position relative to the hole is -pose. With a hidden hole
    // pose the policy probes straight down from where it starts.
    const double nominal_bottom = -obs.pose.z() - scene_.peg_length;
    const double target = scene_.hole_pose_known
                              ? options_.approach_clearance
                              : nominal_bottom;
    Vec3 a(clip(obs.pose.x()), clip(obs.pose.y()),
           clip(target - nominal_bottom));
    if (!scene_.hole_pose_known) a = Vec3::Zero();
    if (a.norm() < 1e-9) {
      aligned_ = true;
      baseline_ = now;
      have_baseline_ = true;
    } else {
      return a;
    }
  }

  const double dv = now.vertical - baseline_.vertical;
  const double dx = now.lateral_x - baseline_.lateral_x;
  const double dy = now.lateral_y - baseline_.lateral_y;
  const double load = std::max({dv, std::abs(dx), std::abs(dy)});
  if (load < options_.contact_force) {
    if (!scene_.hole_pose_known) return Vec3(0.0, 0.0, -options_.blind_step);
    // Fine steps only where the rim can be met given the worst in-hand
    // offset; above and below that band the peg moves at full speed.
    const double nominal_bottom = -obs.pose.z() - scene_.peg_length;
    const double band = scene_.offset_z_max + 0.5;
    if (nominal_bottom > band + options_.fine_step)
      return Vec3(0.0, 0.0, -std::min(bound, nominal_bottom - band));
    if (nominal_bottom < -band) return Vec3(0.0, 0.0, -bound);
    return Vec3(0.0, 0.0, -options_.fine_step);
  }
  Vec3 a(0.0, 0.0, options_.lift);
  const double step = options_.lateral_step;
  if (std::abs(dx) > dv || std::abs(dy) > dv) {
    // Wall contact: the wall pushes the peg; follow the push.
    if (std::abs(dx) >= std::abs(dy))
      a.x() = dx > 0.0 ? step : -step;
    else
      a.y() = dy < 0.0 ? step : -step;
    a.z() = 0.0;
    return a;
  }
  const double curl = now.curl_left - baseline_.curl_left;
  const double shift = now.centroid_left - baseline_.centroid_left;
  // Curl is in N*mm and the centroid shift in mm; compare them per newton of
  // vertical load and per mm of lever.
  const double curl_cue = std::abs(curl) / (dv * scene_.peg_length);
  const double shift_cue = std::abs(shift) / scene_.spring.k_n;
  if (curl_cue >= shift_cue)
    a.x() = curl > 0.0 ? -step : step;
  else
    a.y() = shift < 0.0 ? -step : step;
  return a;
}

std::unique_ptr<Policy> make_policy(const std::string& spec) {
  if (spec == "random") return std::make_unique<RandomPolicy>();
  if (spec == "search") return std::make_unique<SearchPolicy>();
  if (spec.rfind("file:", 0) == 0)
    return std::make_unique<ScriptedPolicy>(
        ScriptedPolicy::from_file(spec.substr(5)));
  throw ConfigError("unknown policy '" + spec +
                    "'; use random, search or file:<path>");
}

}  // namespace tacsim
