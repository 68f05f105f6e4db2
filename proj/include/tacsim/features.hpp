#pragma once

#include <deque>
#include <span>
#include <string>
#include <vector>

#include "tacsim/episode.hpp"
#include "tacsim/frame_io.hpp"

namespace tacsim {

// NT: pose only. TF: per-pad per-axis totals. TB: binarized normal channel.
// DT: raw simulator frames. GCS: augmented frames.
enum class FeatureMode { kNT, kTF, kTB, kDT, kGCS };

std::string to_string(FeatureMode m);
FeatureMode feature_mode_from_string(const std::string& s);

struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;  // row-major

  bool empty() const { return shape.empty(); }
  bool operator==(const Tensor&) const = default;
};

struct ObservationFeature {
  FeatureMode mode = FeatureMode::kNT;
  int k = 1;
  Vec3 pose = Vec3::Zero();
  Tensor tactile;  // empty for NT
};

// Latest k entries of `stream`, oldest first; the earliest entry is repeated
// in front while fewer than k exist. Throws ShapeError on k < 1 or an empty
// stream.
std::vector<PadFrames> history_window(std::span<const PadFrames> stream, int k);

// Channel order everywhere is time-major, then pad (left, right), then axis
// (x, y, z). A history of k steps is k entries of PadFrames.

// 6k vector of per-pad per-axis sums over all taxels.
Tensor total_force(std::span<const PadFrames> history);

// 2k x 6 x 5 tensor: 1 where |normal| >= threshold.
Tensor binarize(std::span<const PadFrames> history, double threshold = 0.1);

// 6k x 6 x 5 tensor of the latest k steps of `stream`, newest last.
Tensor stack_history(std::span<const PadFrames> stream, int k);

// Builds the policy input for `mode`. DT/TF/TB read `raw_stream`, GCS reads
// `augmented_stream`.
ObservationFeature assemble_observation(FeatureMode mode,
                                        const SceneState& state,
                                        const SceneConfig& config,
                                        std::span<const PadFrames> raw_stream,
                                        std::span<const PadFrames> augmented_stream,
                                        int k, double threshold = 0.1);

Json to_json(const ObservationFeature& f);
ObservationFeature observation_from_json(const Json& j);

// In-plane curl of the shear field about the pad centre,
// sum (x * s_y - y * s_x) in N*mm. Positive is counterclockwise seen from the
// peg side.
double shear_rotation(const TaxelFrame& f, const SensorGeometry& g = {});

// Normal-force-weighted mean taxel position relative to the pad centre, mm,
// (x, y) in pad coordinates. Zero when the pad carries no normal load.
Vec2 normal_centroid(const TaxelFrame& f, const SensorGeometry& g = {});

}  // namespace tacsim
