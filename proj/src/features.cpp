#include "tacsim/features.hpp"

#include <algorithm>
#include <cmath>

#include "tacsim/errors.hpp"

namespace tacsim {

std::string to_string(FeatureMode m) {
  switch (m) {
    case FeatureMode::kNT: return "NT";
    case FeatureMode::kTF: return "TF";
    case FeatureMode::kTB: return "TB";
    case FeatureMode::kDT: return "DT";
    case FeatureMode::kGCS: return "GCS";
  }
  return "?";
}

FeatureMode feature_mode_from_string(const std::string& s) {
  for (FeatureMode m : {FeatureMode::kNT, FeatureMode::kTF, FeatureMode::kTB,
                        FeatureMode::kDT, FeatureMode::kGCS})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown feature mode '" + s +
                    "'; valid modes: NT, TF, TB, DT, GCS");
}

namespace {

// All frames must share one shape; returns it.
std::pair<int, int> common_shape(std::span<const PadFrames> history) {
  if (history.empty()) throw ShapeError("empty tactile history");
  const int rows = history.front().left.rows();
  const int cols = history.front().left.cols();
  for (const auto& step : history)
    if (!step.left.is_shape(rows, cols) || !step.right.is_shape(rows, cols))
      throw ShapeError("tactile history mixes frame shapes");
  return {rows, cols};
}

}  // namespace

std::vector<PadFrames> history_window(std::span<const PadFrames> stream, int k) {
  if (k < 1) throw ShapeError("history length k must be >= 1");
  if (stream.empty()) throw ShapeError("no frames to build a history from");
  std::vector<PadFrames> window;
  window.reserve(static_cast<std::size_t>(k));
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(stream.size());
  for (std::ptrdiff_t t = n - k; t < n; ++t)
    window.push_back(stream[static_cast<std::size_t>(std::max<std::ptrdiff_t>(t, 0))]);
  return window;
}

Tensor total_force(std::span<const PadFrames> history) {
  common_shape(history);
  Tensor out;
  out.shape = {static_cast<int>(6 * history.size())};
  out.data.reserve(6 * history.size());
  for (const auto& step : history)
    for (const TaxelFrame* f : {&step.left, &step.right}) {
      const auto totals = f->totals();
      out.data.insert(out.data.end(), totals.begin(), totals.end());
    }
  return out;
}

Tensor binarize(std::span<const PadFrames> history, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("binarize threshold must be > 0");
  const auto [rows, cols] = common_shape(history);
  Tensor out;
  out.shape = {static_cast<int>(2 * history.size()), rows, cols};
  out.data.reserve(2 * history.size() * rows * cols);
  for (const auto& step : history)
    for (const TaxelFrame* f : {&step.left, &step.right})
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
          out.data.push_back(std::abs((*f)(i, j, 2)) >= threshold ? 1.0 : 0.0);
  return out;
}

Tensor stack_history(std::span<const PadFrames> stream, int k) {
  const auto window = history_window(stream, k);
  const auto [rows, cols] = common_shape(window);
  Tensor out;
  out.shape = {6 * k, rows, cols};
  out.data.reserve(static_cast<std::size_t>(6 * k * rows * cols));
  for (const auto& step : window)
    for (const TaxelFrame* f : {&step.left, &step.right})
      for (int axis = 0; axis < 3; ++axis)
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cols; ++j) out.data.push_back((*f)(i, j, axis));
  return out;
}

ObservationFeature assemble_observation(FeatureMode mode,
                                        const SceneState& state,
                                        const SceneConfig& config,
                                        std::span<const PadFrames> raw_stream,
                                        std::span<const PadFrames> augmented_stream,
                                        int k, double threshold) {
  if (k < 1) throw ShapeError("history length k must be >= 1");
  ObservationFeature f;
  f.mode = mode;
  f.k = k;
  f.pose = relative_pose(state, config);
  switch (mode) {
    case FeatureMode::kNT:
      break;
    case FeatureMode::kTF: {
      const auto window = history_window(raw_stream, k);
      f.tactile = total_force(window);
      break;
    }
    case FeatureMode::kTB: {
      const auto window = history_window(raw_stream, k);
      f.tactile = binarize(window, threshold);
      break;
    }
    case FeatureMode::kDT:
      f.tactile = stack_history(raw_stream, k);
      break;
    case FeatureMode::kGCS:
      f.tactile = stack_history(augmented_stream, k);
      break;
  }
  return f;
}

Json to_json(const ObservationFeature& f) {
  Json j;
  j["mode"] = to_string(f.mode);
  j["k"] = f.k;
  j["pose"] = {f.pose.x(), f.pose.y(), f.pose.z()};
  j["shape"] = f.tactile.shape;
  j["data"] = f.tactile.data;
  return j;
}

ObservationFeature observation_from_json(const Json& j) {
  try {
    ObservationFeature f;
    f.mode = feature_mode_from_string(j.at("mode").get<std::string>());
    f.k = j.at("k").get<int>();
    const auto pose = j.at("pose").get<std::vector<double>>();
    if (pose.size() != 3) throw DataError("pose must have 3 entries");
    f.pose = Vec3(pose[0], pose[1], pose[2]);
    f.tactile.shape = j.at("shape").get<std::vector<int>>();
    f.tactile.data = j.at("data").get<std::vector<double>>();
    std::size_t expect = f.tactile.shape.empty() ? 0 : 1;
    for (int d : f.tactile.shape) expect *= static_cast<std::size_t>(d);
    if (expect != f.tactile.data.size())
      throw DataError("feature data does not match its shape");
    return f;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed feature record: ") + e.what());
  }
}

double shear_rotation(const TaxelFrame& f, const SensorGeometry& g) {
  const double p = g.pooled_pitch * g.pooled_rows / f.rows();
  double curl = 0.0;
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) {
      const double x = (j - (f.cols() - 1) / 2.0) * p;
      const double y = (i - (f.rows() - 1) / 2.0) * p;
      curl += x * f(i, j, 1) - y * f(i, j, 0);
    }
  return curl;
}

Vec2 normal_centroid(const TaxelFrame& f, const SensorGeometry& g) {
  const double p = g.pooled_pitch * g.pooled_rows / f.rows();
  double total = 0.0;
  Vec2 moment = Vec2::Zero();
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) {
      const double n = f(i, j, 2);
      total += n;
      moment += n * Vec2((j - (f.cols() - 1) / 2.0) * p,
                         (i - (f.rows() - 1) / 2.0) * p);
    }
  if (total == 0.0) return Vec2::Zero();
  return moment / total;
}

}  // namespace tacsim
