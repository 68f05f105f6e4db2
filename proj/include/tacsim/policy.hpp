#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tacsim/episode.hpp"
#include "tacsim/rng.hpp"

namespace tacsim {

// What a scripted or random controller may look at: the relative pose (zero
// when hidden) and the readings of the latest step.
struct PolicyObservation {
  Vec3 pose = Vec3::Zero();
  PadFrames raw;
  PadFrames augmented;
  int step = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  // Called once per episode before the first act().
  virtual void begin(std::uint64_t episode_seed, const SceneConfig& scene) = 0;
  virtual Vec3 act(const PolicyObservation& obs) = 0;
};

// Uniform actions in the per-step bound, from a stream derived from the
// episode seed.
class RandomPolicy : public Policy {
 public:
  void begin(std::uint64_t episode_seed, const SceneConfig& scene) override;
  Vec3 act(const PolicyObservation& obs) override;

 private:
  std::unique_ptr<Rng> rng_;
  double bound_ = 2.0;
};

// Replays a fixed action list, then holds still.
class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(std::vector<Vec3> actions);
  // Action file: JSON array of [dx, dy, dz] triples.
  static ScriptedPolicy from_file(const std::string& path);

  void begin(std::uint64_t episode_seed, const SceneConfig& scene) override;
  Vec3 act(const PolicyObservation& obs) override;

 private:
  std::vector<Vec3> actions_;
  std::size_t next_ = 0;
};

// Descend-then-search controller on raw readings. Aligns the fingertips over
// the hole when its pose is known, lowers the peg in fine steps and, on
// contact, reads the side of the contact from the tactile signature:
//   - vertical load with a shear curl: rim under the front/back of the peg,
//   - vertical load with a normal-centroid shift: rim under the left/right,
//   - lateral load: a wall on the opposite side.
// It then steps away from the contact and lowers again.
class SearchPolicy : public Policy {
 public:
  struct Options {
    double approach_clearance = 6.0;  // mm above the rim for the nominal peg
    double fine_step = 0.2;           // mm per step near the rim
    double blind_step = 0.3;          // mm per step with the hole pose hidden
    double lateral_step = 0.5;        // mm per correction
    double lift = 0.2;                // mm back up after a contact
    double contact_force = 0.5;       // N, detection threshold
  };

  SearchPolicy() = default;
  explicit SearchPolicy(Options options) : options_(options) {}

  void begin(std::uint64_t episode_seed, const SceneConfig& scene) override;
  Vec3 act(const PolicyObservation& obs) override;

 private:
  struct Signature {
    double vertical = 0.0;   // sum of y shear over both pads
    double lateral_x = 0.0;  // left x shear minus right x shear
    double lateral_y = 0.0;  // left normal minus right normal
    double curl_left = 0.0;
    double centroid_left = 0.0;
  };
  static Signature signature(const PadFrames& f);

  Options options_;
  SceneConfig scene_;
  Signature baseline_;
  bool have_baseline_ = false;
  bool aligned_ = false;
};

// "random", "search" or "file:<path>".
std::unique_ptr<Policy> make_policy(const std::string& spec);

}  // namespace tacsim
