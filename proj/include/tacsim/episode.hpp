#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tacsim/augment.hpp"
#include "tacsim/equilibrium.hpp"
#include "tacsim/scene.hpp"

namespace tacsim {

// Shaped reward of a state:
//   w_reach * exp(-|peg_bottom - hole| / sigma_r)
//   + w_engage * [lateral error < clearance] * clamp(depth / success_depth)
//   + success_bonus * [success]
// For grooves the free axis is ignored in the reaching distance.
double reward(const SceneState& state, const SceneConfig& config);
double reaching_term(const SceneState& state, const SceneConfig& config);
double engagement_term(const SceneState& state, const SceneConfig& config);

// Peg bottom at least success_depth below the rim plane with lateral error
// under the clearance.
bool check_success(const SceneState& state, const SceneConfig& config);

// Clips each component to +-bound.
Vec3 clip_action(const Vec3& action, double bound);

// Fingertip-to-hole relative position, or zeros when the hole pose is hidden.
Vec3 relative_pose(const SceneState& state, const SceneConfig& config);

enum class Termination { kNone, kSuccess, kSlip, kTimeout, kEscaped };
std::string to_string(Termination t);

struct PadFrames {
  TaxelFrame left;
  TaxelFrame right;
  bool operator==(const PadFrames&) const = default;
};

struct StepResult {
  Vec3 action = Vec3::Zero();  // clipped action actually applied
  PadFrames raw;               // simulator output
  PadFrames augmented;         // after augment_frame
  double reward = 0.0;
  bool done = false;
  bool success = false;
  Termination termination = Termination::kNone;
  std::string message;  // slip diagnostics
};

// One episode of a blind-insertion task. The episode RNG stream draws, in
// order: left pad augment params, right pad augment params, the scene reset.
class Episode {
 public:
  Episode(SceneConfig scene, DrConfig dr, std::uint64_t seed);

  // Restarts from the seed. Returns the observation-only step (no reward).
  const StepResult& reset();
  // Throws LifecycleError when the episode is done or was never reset.
  const StepResult& step(const Vec3& action);

  const SceneState& state() const { return state_; }
  const SceneConfig& scene() const { return scene_; }
  const DrConfig& dr() const { return dr_; }
  const AugmentParams& params_left() const { return left_; }
  const AugmentParams& params_right() const { return right_; }
  const StepResult& last() const { return last_; }
  int steps() const { return steps_; }
  bool done() const { return last_.done; }
  std::uint64_t seed() const { return seed_; }

 private:
  // Recomputes contacts and frames for the current pose. Returns false on slip.
  bool observe(StepResult& out);

  SceneConfig scene_;
  DrConfig dr_;
  std::uint64_t seed_;
  AugmentParams left_;
  AugmentParams right_;
  SceneState state_;
  StepResult last_;
  int steps_ = 0;
  bool started_ = false;
};

}  // namespace tacsim
