#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tacsim/augment.hpp"
#include "tacsim/episode.hpp"
#include "tacsim/features.hpp"

namespace tacsim {

// Version of the native core; foreign wrappers must report the same string.
const char* version();

struct EnvStep {
  ObservationFeature observation;
  double reward = 0.0;
  bool done = false;
  bool success = false;
};

// Single-owner episode handle for foreign-language wrappers. `seed` is the
// episode seed itself, so an Env and an Episode built with the same seed
// produce identical steps. Distinct handles share no state.
class Env {
 public:
  // Throws ConfigError naming the valid ids or modes; reset is implied.
  static Env make(const std::string& task, const std::string& mode, int k,
                  std::uint64_t seed, const DrConfig& dr = {},
                  double threshold = 0.1);
  Env(SceneConfig scene, FeatureMode mode, int k, std::uint64_t seed,
      const DrConfig& dr = {}, double threshold = 0.1);

  const ObservationFeature& reset();
  EnvStep step(const Vec3& action);
  void close();

  bool closed() const { return !episode_; }
  bool done() const;
  const ObservationFeature& observation() const { return obs_; }
  const Episode& episode() const;

 private:
  ObservationFeature observe() const;

  FeatureMode mode_;
  int k_;
  double threshold_;
  std::unique_ptr<Episode> episode_;
  std::vector<PadFrames> raw_;
  std::vector<PadFrames> augmented_;
  ObservationFeature obs_;
};

// Augment params for (episode, pad) of an offline stream. Each episode owns
// the stream derive_seed(root_seed, episode) and draws left then right, the
// same order an Episode uses, so offline augmentation of a logged run with
// its root seed reproduces the logged augmented frames.
AugmentParams stream_params(const DrConfig& dr, std::uint64_t root_seed,
                            std::int64_t episode, bool right_pad);

// Augments n pooled frames laid out as a dense (n, 6, 5, 3) array. Frame m is
// treated as the left pad of offline episode m. Throws ShapeError on a bad
// shape or data size.
std::vector<double> augment_batch(std::span<const double> frames,
                                  std::span<const int> shape,
                                  const DrConfig& dr, std::uint64_t seed);

}  // namespace tacsim
