#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "tacsim/scene.hpp"
#include "tacsim/sensor_model.hpp"

namespace tacsim {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

enum class Pad { kLeft, kRight };

// Pad frames are right-handed with z the outward normal pointing at the peg
// and y (rows) along world +z:
//   left pad (y = +d):  x_pad = +x, y_pad = +z, z_pad = -y
//   right pad (y = -d): x_pad = -x, y_pad = +z, z_pad = +y
// Readings are the force the peg applies to the pad: shear in (x_pad, y_pad),
// normal as positive compression.
struct PadAxes {
  Vec3 x;
  Vec3 y;
  Vec3 normal;  // outward, towards the peg
};
PadAxes pad_axes(Pad pad);

enum class TaxelMode { kSeparated, kStick, kSlide };

// One pooled taxel cube as seen by the spring model.
struct TaxelSpring {
  Pad pad = Pad::kLeft;
  int row = 0;
  int col = 0;
  Vec3 r = Vec3::Zero();  // cube centre relative to the fingertip centre
  bool covered = false;   // inside the handle contact patch
  double preload = 0.0;   // compression at zero peg displacement, mm
};

// Covered taxels of both pads with their preload compressions. Each pad's
// normal springs are closed until they carry `state.squeeze`; taller cubes
// (larger surface depth) engage first.
std::vector<TaxelSpring> layout_taxels(const SceneState& state,
                                       const SceneConfig& config,
                                       const TaxelSpringModel& model,
                                       const SensorGeometry& g = {});

// Preload compression of each cube when a force-controlled pad closes with
// total force `squeeze` on cubes offset by `engagement` (mm, >= 0).
std::vector<double> water_fill_preload(const std::vector<double>& engagement,
                                       double squeeze, double k_n);

struct EquilibriumResult {
  TaxelFrame left;       // pooled 6x5
  TaxelFrame right;
  TaxelFrame left_raw;   // 12x10, the binned cube forces before pooling
  TaxelFrame right_raw;
  Vec6 displacement = Vec6::Zero();  // (t, theta), mm and rad
  Vec3 residual_force = Vec3::Zero();
  Vec3 residual_torque = Vec3::Zero();
  std::vector<TaxelMode> modes;  // parallel to the layout
  int iterations = 0;
};

struct SolverOptions {
  int max_iterations = 200;
  double max_translation = 2.0;  // mm; beyond this the peg has slipped
  double max_rotation = 0.1;     // rad
  double min_rcond = 1e-12;
};

// Quasi-static balance of the gripped peg. Unknown is the small rigid
// displacement u = (t, theta) of the peg in the grasp. Each cube acts as a
// normal spring (preloaded) plus a tangential spring; the external wrench and
// the peg weight are balanced exactly. Cubes that would pull are released,
// and cubes whose tangential force leaves the friction cone slide at
// mu * normal along their slip direction (active-set iteration).
//
// Throws SlipError when no admissible equilibrium exists: a pad loses every
// contact, the tangential stiffness vanishes, the active set does not settle,
// or the displacement leaves the small-motion regime.
EquilibriumResult solve_equilibrium(const SceneState& state,
                                    const SceneConfig& config,
                                    const TaxelSpringModel& model,
                                    const Wrench& external,
                                    const SolverOptions& options = {},
                                    const SensorGeometry& g = {});

// Weight of the peg as a wrench about the fingertip centre.
Wrench gravity_wrench(const SceneState& state, const SceneConfig& config);

// Pad reading mirrored about the grasp plane: columns reversed, x shear
// negated. A scene mirrored about y = 0 swaps its pads through this map.
TaxelFrame mirror_frame(const TaxelFrame& f);
SurfaceProfile mirror_surface(const SurfaceProfile& s);

}  // namespace tacsim
