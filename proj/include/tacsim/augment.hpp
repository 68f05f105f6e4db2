#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "tacsim/frame_io.hpp"
#include "tacsim/grid.hpp"
#include "tacsim/rng.hpp"
#include "tacsim/sensor_model.hpp"

namespace tacsim {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Range&) const = default;
};

// Domain-randomization ranges for the three sim-to-real transforms.
// Defaults follow the published table; the bump-mean box and the depth bounds
// are our own choices (see README).
struct DrConfig {
  Range axis_force_range{0.5, 1.5};
  double taxel_force_mean = 1.0;
  double taxel_force_std = 0.25;  // standard deviation, not variance
  double dropout_prob = 0.2;
  Range conv_range{0.1, 0.3};
  Range dev_range{1.0, 3.0};
  Range mean_row_range{0.0, 5.0};
  Range mean_col_range{0.0, 4.0};
  double h_min = 0.8;   // mm
  double h_max = 1.2;   // mm
  double boundary_factor = 0.8;
  double nominal_depth = 1.0;  // mm, used when G is disabled
  bool enable_g = true;
  bool enable_c = true;
  bool enable_s = true;

  // Throws ConfigError on malformed ranges or probabilities.
  void validate() const;

  bool operator==(const DrConfig&) const = default;
};

Json to_json(const DrConfig& c);
// Missing keys keep their defaults; unknown keys are a ConfigError.
DrConfig dr_config_from_json(const Json& j);
DrConfig load_dr_config(const std::string& path);

// Cube depth map realizing one sampled Gaussian bump on the pooled grid.
struct SurfaceProfile {
  Grid<double> depths;            // mm
  std::array<double, 2> bump_mean{0.0, 0.0};  // (row, col) grid coordinates
  std::array<double, 2> bump_dev{1.0, 1.0};
  double h_min = 0.0;
  double h_max = 0.0;
  double boundary_factor = 1.0;
  bool flat = false;

  bool operator==(const SurfaceProfile&) const = default;
};

struct ScalingParams {
  std::array<double, 3> axis_scale{1.0, 1.0, 1.0};
  Grid<double> taxel_scale;          // as drawn, before clamping
  Grid<std::uint8_t> dropout_mask;   // 1 = dead taxel

  // Scale actually applied at (i, j): 0 when dropped, else max(0, beta).
  double effective(int i, int j) const;

  static ScalingParams identity(int rows, int cols);
  bool operator==(const ScalingParams&) const = default;
};

struct AugmentParams {
  SurfaceProfile surface;
  ScalingParams scaling;
  std::array<double, 2> conv_gain{0.0, 0.0};  // (c_x, c_y)
  bool enable_g = false;
  bool enable_c = false;
  bool enable_s = false;
  std::uint64_t seed = 0;

  bool operator==(const AugmentParams&) const = default;
};

Json to_json(const SurfaceProfile& s);
SurfaceProfile surface_from_json(const Json& j);
Json to_json(const AugmentParams& p);
AugmentParams augment_params_from_json(const Json& j);

// Depth of cube (i, j) for a bump centred at `mean` with per-axis deviation
// `dev`: h_min + D / max_grid(D) * (h_max - h_min), where
// D = sqrt((mean_r - i)^2 / dev_r^2 + (mean_c - j)^2 / dev_c^2).
double surface_depth(int i, int j, std::array<double, 2> mean,
                     std::array<double, 2> dev, double h_min, double h_max,
                     int rows = 6, int cols = 5);

// Depths before any boundary reduction.
Grid<double> bump_depths(std::array<double, 2> mean, std::array<double, 2> dev,
                         double h_min, double h_max, int rows = 6,
                         int cols = 5);

// Samples a bump (mean, then deviation) and reduces every boundary cube by
// the configured factor.
SurfaceProfile build_surface(Rng& rng, const DrConfig& config,
                             const SensorGeometry& g = {});
SurfaceProfile make_surface(std::array<double, 2> mean,
                            std::array<double, 2> dev, const DrConfig& config,
                            const SensorGeometry& g = {});
SurfaceProfile flat_surface(double depth, const SensorGeometry& g = {});

// Draws every random quantity regardless of the enable flags, in the order
// alpha (x, y, z), beta (row-major), dropout (row-major), c (x, y), bump mean,
// bump deviation. Disabled transforms are then replaced by their identity, so
// ablations share draws with the full pipeline.
AugmentParams sample_augment_params(Rng& rng, const DrConfig& config,
                                    const SensorGeometry& g = {});

// Shear crosstalk from neighbouring normal load, zero padded:
//   noise_x(i,j) = c_x * (N(i, j-1) - N(i, j+1))
//   noise_y(i,j) = c_y * (N(i-1, j) - N(i+1, j))
// A loaded neighbour pushes this taxel away from the load.
Grid<std::array<double, 2>> poisson_convolve(const TaxelFrame& frame,
                                             double c_x, double c_y,
                                             const SensorGeometry& g = {});

TaxelFrame apply_scaling(const TaxelFrame& frame, const ScalingParams& s);

// Poisson crosstalk (if enabled) followed by force scaling (if enabled). The
// surface transform acts inside the grasp simulator, never here.
TaxelFrame augment_frame(const TaxelFrame& frame, const AugmentParams& p,
                         const SensorGeometry& g = {});

}  // namespace tacsim
