#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "tacsim/augment.hpp"
#include "tacsim/frame_io.hpp"
#include "tacsim/rng.hpp"

namespace tacsim {

// Hole frame: origin at the hole centre on the rim plane, x forward, y left
// (the grasp axis, left pad on +y), z up. Lengths in mm, forces in N.

enum class TaskId { kRY2mm, kRU2mm, kSQ2mm, kSQ1mm, kSX2mm, kSY2mm };
enum class PegShape { kRound, kSquare };
enum class HandleShape { kCylinder, kCube };
enum class HoleShape { kRound, kSquare, kGrooveX, kGrooveY };

const std::vector<TaskId>& all_tasks();
std::string to_string(TaskId t);
// Throws ConfigError listing the valid ids.
TaskId task_from_string(std::string_view s);
std::string valid_task_list();

std::string to_string(PegShape s);
std::string to_string(HandleShape s);
std::string to_string(HoleShape s);

struct TaxelSpringModel {
  double k_n = 5.0;          // N/mm per taxel
  double k_t = 2.0;          // N/mm per taxel
  double friction_mu = 0.4;  // taxel/handle Coulomb ratio

  void validate() const;
  bool operator==(const TaxelSpringModel&) const = default;
};

struct RewardConfig {
  double sigma_r = 10.0;  // mm
  double w_reach = 1.0;
  double w_engage = 1.0;
  double success_bonus = 10.0;
  double step_penalty = 0.01;

  bool operator==(const RewardConfig&) const = default;
};

struct SceneConfig {
  TaskId task = TaskId::kRY2mm;
  PegShape peg_shape = PegShape::kRound;
  HandleShape handle_shape = HandleShape::kCylinder;
  HoleShape hole_shape = HoleShape::kRound;
  double clearance = 2.0;  // hole width minus peg width
  bool hole_pose_known = true;

  // Peg-bottom start box relative to the hole centre.
  Range init_x{-15.0, 15.0};
  Range init_y{-15.0, 15.0};
  Range init_z{5.0, 20.0};
  // In-hand offset of the grip point from the fingertip centre, sampled per
  // reset along the pad plane (x forward, z up).
  double offset_x_max = 3.0;
  double offset_z_max = 3.0;

  double peg_size = 20.0;        // diameter (round) or side (square)
  double handle_size = 25.0;     // cylinder diameter or cube side
  double handle_height = 25.0;   // extent of the gripped handle along z
  double strip_half_width = 5.0; // cylinder line-contact half width on a pad
  double peg_length = 50.0;      // grip point to peg bottom
  double com_below_grip = 20.0;
  double peg_mass = 0.1;         // kg
  double gravity = 9.81;         // m/s^2
  double hole_depth = 20.0;

  double grip_force = 60.0;      // commanded, split evenly over both pads
  double k_pen = 50.0;           // rim penalty stiffness, N/mm
  double contact_mu = 0.3;       // peg/base friction
  TaxelSpringModel spring;
  RewardConfig reward;

  double success_depth = 5.0;
  double action_bound = 2.0;
  int max_steps = 100;
  double workspace_radius = 50.0;  // lateral escape bound on the peg bottom
  double workspace_height = 60.0;

  double hole_size() const { return peg_size + clearance; }
  double squeeze() const { return grip_force / 2.0; }
  double peg_weight() const { return peg_mass * gravity; }

  void validate() const;
  bool operator==(const SceneConfig&) const = default;
};

SceneConfig default_scene(TaskId task);
Json to_json(const SceneConfig& c);
// Starts from default_scene(task) and applies the remaining keys.
SceneConfig scene_config_from_json(const Json& j);
SceneConfig load_scene_config(const std::string& path);

struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();  // about the fingertip centre, N*mm
};

enum class ContactKind { kRimTop, kWall, kFloor };
std::string to_string(ContactKind k);

struct Contact {
  ContactKind kind = ContactKind::kRimTop;
  Vec3 position = Vec3::Zero();  // hole frame
  Vec3 normal = Vec3::UnitZ();   // unit, acting on the peg
  double penetration = 0.0;      // mm
  Vec3 force = Vec3::Zero();     // on the peg, normal plus friction
};

// Poses are translations: the peg and fingertips stay aligned with the hole
// frame.
struct SceneState {
  Vec3 hand_pos = Vec3::Zero();        // fingertip centre
  Vec3 in_hand_offset = Vec3::Zero();  // grip point minus fingertip centre
  double squeeze = 30.0;               // normal preload per pad, N
  Vec3 last_motion = Vec3::Zero();     // most recent clipped action
  std::vector<Contact> contact_set;
  SurfaceProfile surface_left;
  SurfaceProfile surface_right;
  // Elastic peg displacement in the grasp from the last equilibrium solve:
  // translation (mm) then small rotation (rad).
  std::array<double, 6> peg_displacement{};

  Vec3 grip_point() const { return hand_pos + in_hand_offset; }
};

Vec3 peg_bottom(const SceneState& s, const SceneConfig& c);
Vec3 peg_com(const SceneState& s, const SceneConfig& c);

// Fresh episode state. Peg bottom uniform in the init box, in-hand offset
// uniform in the offset box; the surfaces come from the episode's augment
// draw.
SceneState reset_scene(Rng& rng, const SceneConfig& config,
                       SurfaceProfile left, SurfaceProfile right);

// Places the peg bottom at `bottom` for a given in-hand offset.
SceneState place_peg(const SceneConfig& config, const Vec3& bottom,
                     const Vec3& in_hand_offset, SurfaceProfile left,
                     SurfaceProfile right);

struct ContactResult {
  std::vector<Contact> contacts;
  Wrench wrench;  // net, about the fingertip centre
};

// Penalty contacts between the peg bottom and the hole base. Each wall, rim
// or floor interaction yields one point contact; a submerged peg overlapping
// the rim is resolved along the shallower of lifting and lateral pushing.
ContactResult rim_contact(const SceneState& state, const SceneConfig& config);

// Distance of the peg bottom from the hole centre along the axes the hole
// constrains (both for round/square holes, one for grooves).
double lateral_error(const SceneState& state, const SceneConfig& config);

// Force applied at `point`, with its torque taken about `origin`.
Wrench wrench_about(const Vec3& point, const Vec3& force, const Vec3& origin);

}  // namespace tacsim
