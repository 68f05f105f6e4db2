#include "tacsim/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tacsim/errors.hpp"

namespace tacsim {

namespace {

void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
    throw ConfigError(std::string(name) + ": need finite lo <= hi");
}

Json range_json(const Range& r) { return Json::array({r.lo, r.hi}); }

Range range_from(const Json& j, const char* name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number())
    throw ConfigError(std::string(name) + ": expected [lo, hi]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json grid_json(const Grid<double>& g) {
  Json rows = Json::array();
  for (int i = 0; i < g.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < g.cols(); ++j) row.push_back(g(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
Grid<T> grid_from(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw DataError("expected a nested list grid");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Grid<T> g(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (j[r].size() != static_cast<std::size_t>(cols))
      throw DataError("ragged grid");
    for (int c = 0; c < cols; ++c) g(r, c) = j[r][c].get<T>();
  }
  return g;
}

}  // namespace

void DrConfig::validate() const {
  check_range(axis_force_range, "axis_force_range");
  check_range(conv_range, "conv_range");
  check_range(dev_range, "dev_range");
  check_range(mean_row_range, "mean_row_range");
  check_range(mean_col_range, "mean_col_range");
  if (axis_force_range.lo < 0.0)
    throw ConfigError("axis_force_range must be non-negative");
  if (dev_range.lo <= 0.0)
    throw ConfigError("dev_range must be strictly positive");
  if (!std::isfinite(taxel_force_mean) || !(taxel_force_std >= 0.0) ||
      !std::isfinite(taxel_force_std))
    throw ConfigError("taxel_force_mean/std must be finite, std >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0))
    throw ConfigError("dropout_prob must lie in [0, 1]");
  if (!(h_min > 0.0) || !(h_min < h_max) || !std::isfinite(h_max))
    throw ConfigError("need 0 < h_min < h_max");
  if (!(boundary_factor > 0.0 && boundary_factor <= 1.0))
    throw ConfigError("boundary_factor must lie in (0, 1]");
  if (!(nominal_depth > 0.0)) throw ConfigError("nominal_depth must be > 0");
}

Json to_json(const DrConfig& c) {
  Json j;
  j["axis_force_range"] = range_json(c.axis_force_range);
  j["taxel_force_mean"] = c.taxel_force_mean;
  j["taxel_force_std"] = c.taxel_force_std;
  j["dropout_prob"] = c.dropout_prob;
  j["conv_range"] = range_json(c.conv_range);
  j["dev_range"] = range_json(c.dev_range);
  j["mean_row_range"] = range_json(c.mean_row_range);
  j["mean_col_range"] = range_json(c.mean_col_range);
  j["h_min"] = c.h_min;
  j["h_max"] = c.h_max;
  j["boundary_factor"] = c.boundary_factor;
  j["nominal_depth"] = c.nominal_depth;
  j["enable_g"] = c.enable_g;
  j["enable_c"] = c.enable_c;
  j["enable_s"] = c.enable_s;
  return j;
}

DrConfig dr_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("DR config must be a JSON object");
  DrConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "axis_force_range") c.axis_force_range = range_from(v, "axis_force_range");
      else if (key == "taxel_force_mean") c.taxel_force_mean = v.get<double>();
      else if (key == "taxel_force_std") c.taxel_force_std = v.get<double>();
      else if (key == "dropout_prob") c.dropout_prob = v.get<double>();
      else if (key == "conv_range") c.conv_range = range_from(v, "conv_range");
      else if (key == "dev_range") c.dev_range = range_from(v, "dev_range");
      else if (key == "mean_row_range") c.mean_row_range = range_from(v, "mean_row_range");
      else if (key == "mean_col_range") c.mean_col_range = range_from(v, "mean_col_range");
      else if (key == "h_min") c.h_min = v.get<double>();
      else if (key == "h_max") c.h_max = v.get<double>();
      else if (key == "boundary_factor") c.boundary_factor = v.get<double>();
      else if (key == "nominal_depth") c.nominal_depth = v.get<double>();
      else if (key == "enable_g") c.enable_g = v.get<bool>();
      else if (key == "enable_c") c.enable_c = v.get<bool>();
      else if (key == "enable_s") c.enable_s = v.get<bool>();
      else throw ConfigError("unknown DR config key '" + key + "'");
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("DR config: ") + e.what());
  }
  c.validate();
  return c;
}

DrConfig load_dr_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open DR config " + path);
  try {
    return dr_config_from_json(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

double ScalingParams::effective(int i, int j) const {
  if (dropout_mask(i, j)) return 0.0;
  return std::max(0.0, taxel_scale(i, j));
}

ScalingParams ScalingParams::identity(int rows, int cols) {
  ScalingParams s;
  s.taxel_scale = Grid<double>(rows, cols, 1.0);
  s.dropout_mask = Grid<std::uint8_t>(rows, cols, 0);
  return s;
}

Json to_json(const SurfaceProfile& s) {
  Json j;
  j["flat"] = s.flat;
  j["bump_mean"] = s.bump_mean;
  j["bump_dev"] = s.bump_dev;
  j["h_min"] = s.h_min;
  j["h_max"] = s.h_max;
  j["boundary_factor"] = s.boundary_factor;
  j["depths"] = grid_json(s.depths);
  return j;
}

SurfaceProfile surface_from_json(const Json& j) {
  try {
    SurfaceProfile s;
    s.flat = j.at("flat").get<bool>();
    s.bump_mean = j.at("bump_mean").get<std::array<double, 2>>();
    s.bump_dev = j.at("bump_dev").get<std::array<double, 2>>();
    s.h_min = j.at("h_min").get<double>();
    s.h_max = j.at("h_max").get<double>();
    s.boundary_factor = j.at("boundary_factor").get<double>();
    s.depths = grid_from<double>(j.at("depths"));
    return s;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed surface record: ") + e.what());
  }
}

Json to_json(const AugmentParams& p) {
  Json j;
  j["seed"] = p.seed;
  j["enable_g"] = p.enable_g;
  j["enable_c"] = p.enable_c;
  j["enable_s"] = p.enable_s;
  j["axis_scale"] = p.scaling.axis_scale;
  j["taxel_scale"] = grid_json(p.scaling.taxel_scale);
  Json mask = Json::array();
  for (int i = 0; i < p.scaling.dropout_mask.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < p.scaling.dropout_mask.cols(); ++k)
      row.push_back(static_cast<int>(p.scaling.dropout_mask(i, k)));
    mask.push_back(std::move(row));
  }
  j["dropout_mask"] = std::move(mask);
  j["conv_gain"] = p.conv_gain;
  j["surface"] = to_json(p.surface);
  return j;
}

AugmentParams augment_params_from_json(const Json& j) {
  try {
    AugmentParams p;
    p.seed = j.at("seed").get<std::uint64_t>();
    p.enable_g = j.at("enable_g").get<bool>();
    p.enable_c = j.at("enable_c").get<bool>();
    p.enable_s = j.at("enable_s").get<bool>();
    p.scaling.axis_scale = j.at("axis_scale").get<std::array<double, 3>>();
    p.scaling.taxel_scale = grid_from<double>(j.at("taxel_scale"));
    p.scaling.dropout_mask = grid_from<std::uint8_t>(j.at("dropout_mask"));
    p.conv_gain = j.at("conv_gain").get<std::array<double, 2>>();
    p.surface = surface_from_json(j.at("surface"));
    return p;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed augment params: ") + e.what());
  }
}

namespace {

double bump_distance(int i, int j, std::array<double, 2> mean,
                     std::array<double, 2> dev) {
  const double dr = (mean[0] - i) / dev[0];
  const double dc = (mean[1] - j) / dev[1];
  return std::sqrt(dr * dr + dc * dc);
}

void check_bump(std::array<double, 2> dev, double h_min, double h_max) {
  if (!(dev[0] > 0.0) || !(dev[1] > 0.0) || !std::isfinite(dev[0]) ||
      !std::isfinite(dev[1]))
    throw SingularParameterError("bump deviation must be finite and > 0");
  if (!(h_min < h_max)) throw ConfigError("surface depth needs h_min < h_max");
}

}  // namespace

Grid<double> bump_depths(std::array<double, 2> mean, std::array<double, 2> dev,
                         double h_min, double h_max, int rows, int cols) {
  check_bump(dev, h_min, h_max);
  Grid<double> dist(rows, cols);
  double max_d = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      dist(i, j) = bump_distance(i, j, mean, dev);
      max_d = std::max(max_d, dist(i, j));
    }
  // Only possible for a 1x1 grid with the mean on the single taxel.
  if (!(max_d > 0.0))
    throw SingularParameterError("bump distance vanishes on the whole grid");
  Grid<double> depths(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      depths(i, j) = std::lerp(h_min, h_max, dist(i, j) / max_d);
  return depths;
}

double surface_depth(int i, int j, std::array<double, 2> mean,
                     std::array<double, 2> dev, double h_min, double h_max,
                     int rows, int cols) {
  if (i < 0 || i >= rows || j < 0 || j >= cols)
    throw IndexError("surface_depth: taxel outside grid");
  return bump_depths(mean, dev, h_min, h_max, rows, cols)(i, j);
}

SurfaceProfile make_surface(std::array<double, 2> mean,
                            std::array<double, 2> dev, const DrConfig& config,
                            const SensorGeometry& g) {
  SurfaceProfile s;
  s.bump_mean = mean;
  s.bump_dev = dev;
  s.h_min = config.h_min;
  s.h_max = config.h_max;
  s.boundary_factor = config.boundary_factor;
  s.depths = bump_depths(mean, dev, config.h_min, config.h_max, g.pooled_rows,
                         g.pooled_cols);
  const int last_row = g.pooled_rows - 1;
  const int last_col = g.pooled_cols - 1;
  for (int i = 0; i < g.pooled_rows; ++i)
    for (int j = 0; j < g.pooled_cols; ++j)
      if (i == 0 || j == 0 || i == last_row || j == last_col)
        s.depths(i, j) *= config.boundary_factor;
  return s;
}

SurfaceProfile build_surface(Rng& rng, const DrConfig& config,
                             const SensorGeometry& g) {
  config.validate();
  std::array<double, 2> mean{
      rng.uniform(config.mean_row_range.lo, config.mean_row_range.hi),
      rng.uniform(config.mean_col_range.lo, config.mean_col_range.hi)};
  std::array<double, 2> dev{rng.uniform(config.dev_range.lo, config.dev_range.hi),
                            rng.uniform(config.dev_range.lo, config.dev_range.hi)};
  return make_surface(mean, dev, config, g);
}

SurfaceProfile flat_surface(double depth, const SensorGeometry& g) {
  SurfaceProfile s;
  s.flat = true;
  s.h_min = depth;
  s.h_max = depth;
  s.boundary_factor = 1.0;
  s.depths = Grid<double>(g.pooled_rows, g.pooled_cols, depth);
  return s;
}

AugmentParams sample_augment_params(Rng& rng, const DrConfig& config,
                                    const SensorGeometry& g) {
  config.validate();
  const int rows = g.pooled_rows;
  const int cols = g.pooled_cols;
  AugmentParams p;
  p.enable_g = config.enable_g;
  p.enable_c = config.enable_c;
  p.enable_s = config.enable_s;

  ScalingParams s = ScalingParams::identity(rows, cols);
  for (double& a : s.axis_scale)
    a = rng.uniform(config.axis_force_range.lo, config.axis_force_range.hi);
  for (double& b : s.taxel_scale.values())
    b = rng.normal(config.taxel_force_mean, config.taxel_force_std);
  for (auto& m : s.dropout_mask.values())
    m = rng.bernoulli(config.dropout_prob) ? 1 : 0;
  std::array<double, 2> conv{
      rng.uniform(config.conv_range.lo, config.conv_range.hi),
      rng.uniform(config.conv_range.lo, config.conv_range.hi)};
  SurfaceProfile surface = build_surface(rng, config, g);

  p.scaling = config.enable_s ? std::move(s) : ScalingParams::identity(rows, cols);
  p.conv_gain = config.enable_c ? conv : std::array<double, 2>{0.0, 0.0};
  p.surface = config.enable_g ? std::move(surface)
                              : flat_surface(config.nominal_depth, g);
  return p;
}

Grid<std::array<double, 2>> poisson_convolve(const TaxelFrame& frame,
                                             double c_x, double c_y,
                                             const SensorGeometry& g) {
  require_resolution(frame, g, Resolution::kPooled, "poisson_convolve");
  if (!std::isfinite(c_x) || !std::isfinite(c_y))
    throw ConfigError("poisson_convolve: gains must be finite");
  const int rows = frame.rows();
  const int cols = frame.cols();
  auto normal = [&](int i, int j) {
    return (i < 0 || i >= rows || j < 0 || j >= cols) ? 0.0 : frame(i, j, 2);
  };
  Grid<std::array<double, 2>> noise(rows, cols, {0.0, 0.0});
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      noise(i, j)[0] = c_x * (normal(i, j - 1) - normal(i, j + 1));
      noise(i, j)[1] = c_y * (normal(i - 1, j) - normal(i + 1, j));
    }
  return noise;
}

TaxelFrame apply_scaling(const TaxelFrame& frame, const ScalingParams& s) {
  if (s.taxel_scale.rows() != frame.rows() ||
      s.taxel_scale.cols() != frame.cols() ||
      s.dropout_mask.rows() != frame.rows() ||
      s.dropout_mask.cols() != frame.cols())
    throw ShapeError("apply_scaling: taxel scale grid does not match frame");
  TaxelFrame out = frame;
  for (int i = 0; i < frame.rows(); ++i)
    for (int j = 0; j < frame.cols(); ++j) {
      const double beta = s.effective(i, j);
      for (int a = 0; a < 3; ++a)
        out(i, j, a) = frame(i, j, a) * s.axis_scale[a] * beta;
    }
  return out;
}

TaxelFrame augment_frame(const TaxelFrame& frame, const AugmentParams& p,
                         const SensorGeometry& g) {
  require_resolution(frame, g, Resolution::kPooled, "augment_frame");
  TaxelFrame out = frame;
  if (p.enable_c) {
    const auto noise = poisson_convolve(frame, p.conv_gain[0], p.conv_gain[1], g);
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j) {
        out(i, j, 0) += noise(i, j)[0];
        out(i, j, 1) += noise(i, j)[1];
      }
  }
  if (p.enable_s) out = apply_scaling(out, p.scaling);
  return out;
}

}  // namespace tacsim
