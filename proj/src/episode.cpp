#include "tacsim/episode.hpp"

#include <algorithm>
#include <cmath>

#include "tacsim/errors.hpp"

namespace tacsim {

namespace {

Vec3 reach_offset(const SceneState& state, const SceneConfig& config) {
  Vec3 d = peg_bottom(state, config);
  if (config.hole_shape == HoleShape::kGrooveX) d.x() = 0.0;
  if (config.hole_shape == HoleShape::kGrooveY) d.y() = 0.0;
  return d;
}

}  // namespace

double reaching_term(const SceneState& state, const SceneConfig& config) {
  return std::exp(-reach_offset(state, config).norm() / config.reward.sigma_r);
}

double engagement_term(const SceneState& state, const SceneConfig& config) {
  if (!(lateral_error(state, config) < config.clearance)) return 0.0;
  const double depth = -peg_bottom(state, config).z();
  return std::clamp(depth / config.success_depth, 0.0, 1.0);
}

bool check_success(const SceneState& state, const SceneConfig& config) {
  return -peg_bottom(state, config).z() >= config.success_depth &&
         lateral_error(state, config) < config.clearance;
}

double reward(const SceneState& state, const SceneConfig& config) {
  const RewardConfig& r = config.reward;
  double total = r.w_reach * reaching_term(state, config) +
                 r.w_engage * engagement_term(state, config);
  if (check_success(state, config)) total += r.success_bonus;
  return total;
}

Vec3 clip_action(const Vec3& action, double bound) {
  Vec3 out;
  for (int k = 0; k < 3; ++k) {
    if (!std::isfinite(action[k])) throw DataError("non-finite action");
    out[k] = std::clamp(action[k], -bound, bound);
  }
  return out;
}

Vec3 relative_pose(const SceneState& state, const SceneConfig& config) {
  if (!config.hole_pose_known) return Vec3::Zero();
  return -state.hand_pos;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kNone: return "none";
    case Termination::kSuccess: return "success";
    case Termination::kSlip: return "slip";
    case Termination::kTimeout: return "timeout";
    case Termination::kEscaped: return "escaped";
  }
  return "?";
}

Episode::Episode(SceneConfig scene, DrConfig dr, std::uint64_t seed)
    : scene_(std::move(scene)), dr_(std::move(dr)), seed_(seed) {
  scene_.validate();
  dr_.validate();
}

bool Episode::observe(StepResult& out) {
  const ContactResult contacts = rim_contact(state_, scene_);
  state_.contact_set = contacts.contacts;
  try {
    const EquilibriumResult eq =
        solve_equilibrium(state_, scene_, scene_.spring, contacts.wrench);
    for (int k = 0; k < 6; ++k) state_.peg_displacement[k] = eq.displacement[k];
    out.raw = {eq.left, eq.right};
    out.augmented = {augment_frame(eq.left, left_),
                     augment_frame(eq.right, right_)};
    return true;
  } catch (const SlipError& e) {
    // Readings from the last admissible state are kept.
    out.raw = last_.raw;
    out.augmented = last_.augmented;
    out.message = e.what();
    return false;
  }
}

const StepResult& Episode::reset() {
  Rng rng(seed_);
  left_ = sample_augment_params(rng, dr_);
  right_ = sample_augment_params(rng, dr_);
  left_.seed = seed_;
  right_.seed = seed_;
  state_ = reset_scene(rng, scene_, left_.surface, right_.surface);
  steps_ = 0;
  started_ = true;
  last_ = StepResult{};
  last_.raw = {TaxelFrame::pooled(), TaxelFrame::pooled()};
  last_.augmented = last_.raw;
  StepResult first;
  if (!observe(first)) {
    first.done = true;
    first.termination = Termination::kSlip;
  }
  last_ = std::move(first);
  return last_;
}

const StepResult& Episode::step(const Vec3& action) {
  if (!started_) throw LifecycleError("step before reset");
  if (last_.done) throw LifecycleError("episode is done; call reset first");

  StepResult out;
  out.action = clip_action(action, scene_.action_bound);
  state_.hand_pos += out.action;
  state_.last_motion = out.action;
  ++steps_;

  const bool held = observe(out);
  const Vec3 bottom = peg_bottom(state_, scene_);
  if (!held) {
    out.done = true;
    out.termination = Termination::kSlip;
  } else if (check_success(state_, scene_)) {
    out.done = true;
    out.success = true;
    out.termination = Termination::kSuccess;
  } else if (std::hypot(bottom.x(), bottom.y()) > scene_.workspace_radius ||
             bottom.z() > scene_.workspace_height) {
    out.done = true;
    out.termination = Termination::kEscaped;
  } else if (steps_ >= scene_.max_steps) {
    out.done = true;
    out.termination = Termination::kTimeout;
  }
  out.reward = reward(state_, scene_) - scene_.reward.step_penalty;
  last_ = std::move(out);
  return last_;
}

}  // namespace tacsim
