#include "tacsim/env.hpp"

#include <algorithm>

#include "tacsim/errors.hpp"
#include "tacsim/rng.hpp"

namespace tacsim {

const char* version() { return TACSIM_VERSION; }

Env Env::make(const std::string& task, const std::string& mode, int k,
              std::uint64_t seed, const DrConfig& dr, double threshold) {
  return Env(default_scene(task_from_string(task)),
             feature_mode_from_string(mode), k, seed, dr, threshold);
}

Env::Env(SceneConfig scene, FeatureMode mode, int k, std::uint64_t seed,
         const DrConfig& dr, double threshold)
    : mode_(mode), k_(k), threshold_(threshold) {
  if (k < 1) throw ShapeError("history length k must be >= 1");
  episode_ = std::make_unique<Episode>(std::move(scene), dr, seed);
  reset();
}

const Episode& Env::episode() const {
  if (!episode_) throw LifecycleError("environment is closed");
  return *episode_;
}

bool Env::done() const { return episode().done(); }

ObservationFeature Env::observe() const {
  return assemble_observation(mode_, episode_->state(), episode_->scene(), raw_,
                              augmented_, k_, threshold_);
}

const ObservationFeature& Env::reset() {
  if (!episode_) throw LifecycleError("environment is closed");
  const StepResult& r = episode_->reset();
  raw_.assign(1, r.raw);
  augmented_.assign(1, r.augmented);
  obs_ = observe();
  return obs_;
}

EnvStep Env::step(const Vec3& action) {
  if (!episode_) throw LifecycleError("environment is closed");
  const StepResult& r = episode_->step(action);
  raw_.push_back(r.raw);
  augmented_.push_back(r.augmented);
  // Only the latest k entries are ever read.
  const auto keep = static_cast<std::size_t>(k_);
  if (raw_.size() > keep) {
    raw_.erase(raw_.begin(), raw_.end() - static_cast<std::ptrdiff_t>(keep));
    augmented_.erase(augmented_.begin(),
                     augmented_.end() - static_cast<std::ptrdiff_t>(keep));
  }
  obs_ = observe();
  return {obs_, r.reward, r.done, r.success};
}

void Env::close() { episode_.reset(); }

AugmentParams stream_params(const DrConfig& dr, std::uint64_t root_seed,
                            std::int64_t episode, bool right_pad) {
  const std::uint64_t seed =
      derive_seed(root_seed, static_cast<std::uint64_t>(episode));
  Rng rng(seed);
  AugmentParams p = sample_augment_params(rng, dr);
  if (right_pad) p = sample_augment_params(rng, dr);
  p.seed = seed;
  return p;
}

std::vector<double> augment_batch(std::span<const double> frames,
                                  std::span<const int> shape,
                                  const DrConfig& dr, std::uint64_t seed) {
  const SensorGeometry g;
  if (shape.size() != 4 || shape[0] < 0 || shape[1] != g.pooled_rows ||
      shape[2] != g.pooled_cols || shape[3] != 3)
    throw ShapeError("augment_batch expects an (n, 6, 5, 3) array");
  const std::size_t per = static_cast<std::size_t>(g.pooled_rows * g.pooled_cols * 3);
  const std::size_t n = static_cast<std::size_t>(shape[0]);
  if (frames.size() != n * per)
    throw ShapeError("augment_batch: data size " + std::to_string(frames.size()) +
                     " does not match shape (" + std::to_string(n) +
                     ", 6, 5, 3)");
  dr.validate();
  std::vector<double> out(frames.size());
  for (std::size_t m = 0; m < n; ++m) {
    TaxelFrame f = TaxelFrame::pooled(g);
    std::copy_n(frames.begin() + static_cast<std::ptrdiff_t>(m * per), per,
                f.data().begin());
    const AugmentParams p =
        stream_params(dr, seed, static_cast<std::int64_t>(m), false);
    const TaxelFrame a = augment_frame(f, p, g);
    std::copy(a.data().begin(), a.data().end(),
              out.begin() + static_cast<std::ptrdiff_t>(m * per));
  }
  return out;
}

}  // namespace tacsim
