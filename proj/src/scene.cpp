#include "tacsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tacsim/errors.hpp"

namespace tacsim {

namespace {

struct TaskInfo {
  TaskId id;
  const char* name;
};

constexpr TaskInfo kTasks[] = {
    {TaskId::kRY2mm, "RY-2mm"}, {TaskId::kRU2mm, "RU-2mm"},
    {TaskId::kSQ2mm, "SQ-2mm"}, {TaskId::kSQ1mm, "SQ-1mm"},
    {TaskId::kSX2mm, "SX-2mm"}, {TaskId::kSY2mm, "SY-2mm"},
};

}  // namespace

const std::vector<TaskId>& all_tasks() {
  static const std::vector<TaskId> tasks = [] {
    std::vector<TaskId> v;
    for (const auto& t : kTasks) v.push_back(t.id);
    return v;
  }();
  return tasks;
}

std::string to_string(TaskId t) {
  for (const auto& info : kTasks)
    if (info.id == t) return info.name;
  return "?";
}

std::string valid_task_list() {
  std::string out;
  for (const auto& info : kTasks) {
    if (!out.empty()) out += ", ";
    out += info.name;
  }
  return out;
}

TaskId task_from_string(std::string_view s) {
  for (const auto& info : kTasks)
    if (s == info.name) return info.id;
  throw ConfigError("unknown task id '" + std::string(s) +
                    "'; valid ids: " + valid_task_list());
}

std::string to_string(PegShape s) {
  return s == PegShape::kRound ? "round" : "square";
}

std::string to_string(HandleShape s) {
  return s == HandleShape::kCylinder ? "cylinder" : "cube";
}

std::string to_string(HoleShape s) {
  switch (s) {
    case HoleShape::kRound: return "round";
    case HoleShape::kSquare: return "square";
    case HoleShape::kGrooveX: return "groove-x";
    case HoleShape::kGrooveY: return "groove-y";
  }
  return "?";
}

std::string to_string(ContactKind k) {
  switch (k) {
    case ContactKind::kRimTop: return "rim";
    case ContactKind::kWall: return "wall";
    case ContactKind::kFloor: return "floor";
  }
  return "?";
}

void TaxelSpringModel::validate() const {
  if (!(k_n > 0.0) || !(k_t > 0.0))
    throw ConfigError("taxel stiffnesses must be positive");
  if (!(friction_mu > 0.0)) throw ConfigError("friction_mu must be positive");
}

void SceneConfig::validate() const {
  if (clearance != 1.0 && clearance != 2.0)
    throw ConfigError("clearance must be 1 or 2 mm");
  const bool groove =
      hole_shape == HoleShape::kGrooveX || hole_shape == HoleShape::kGrooveY;
  if (groove && hole_pose_known)
    throw ConfigError("groove tasks must hide the hole pose");
  for (const Range* r : {&init_x, &init_y, &init_z})
    if (!(r->lo <= r->hi)) throw ConfigError("init box needs lo <= hi");
  if (!(peg_size > 0.0) || !(handle_size > 0.0) || !(handle_height > 0.0) ||
      !(peg_length > 0.0) || !(hole_depth > 0.0) || !(strip_half_width > 0.0))
    throw ConfigError("geometry lengths must be positive");
  if (offset_x_max < 0.0 || offset_z_max < 0.0 || peg_mass < 0.0 ||
      gravity < 0.0)
    throw ConfigError("offsets, mass and gravity must be non-negative");
  if (!(grip_force > 0.0)) throw ConfigError("grip_force must be positive");
  if (!(k_pen > 0.0) || contact_mu < 0.0)
    throw ConfigError("k_pen must be positive, contact_mu non-negative");
  spring.validate();
  if (!(reward.sigma_r > 0.0)) throw ConfigError("sigma_r must be positive");
  if (!(success_depth > 0.0) || !(action_bound > 0.0) || max_steps < 1)
    throw ConfigError("success_depth, action_bound, max_steps must be positive");
}

SceneConfig default_scene(TaskId task) {
  SceneConfig c;
  c.task = task;
  switch (task) {
    case TaskId::kRY2mm:
      c.peg_shape = PegShape::kRound;
      c.handle_shape = HandleShape::kCylinder;
      c.handle_size = 20.0;
      c.hole_shape = HoleShape::kRound;
      c.clearance = 2.0;
      break;
    case TaskId::kRU2mm:
      c.peg_shape = PegShape::kRound;
      c.handle_shape = HandleShape::kCube;
      c.hole_shape = HoleShape::kRound;
      c.clearance = 2.0;
      break;
    case TaskId::kSQ2mm:
    case TaskId::kSQ1mm:
      c.peg_shape = PegShape::kSquare;
      c.handle_shape = HandleShape::kCube;
      c.hole_shape = HoleShape::kSquare;
      c.clearance = task == TaskId::kSQ2mm ? 2.0 : 1.0;
      break;
    case TaskId::kSX2mm:
    case TaskId::kSY2mm:
      c.peg_shape = PegShape::kSquare;
      c.handle_shape = HandleShape::kCube;
      c.hole_shape =
          task == TaskId::kSX2mm ? HoleShape::kGrooveX : HoleShape::kGrooveY;
      c.clearance = 2.0;
      c.hole_pose_known = false;
      break;
  }
  return c;
}

namespace {

Json range_json(const Range& r) { return Json::array({r.lo, r.hi}); }

Range range_from(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError("expected [lo, hi] range");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class E>
E enum_from(const Json& j, std::initializer_list<E> options) {
  const auto s = j.get<std::string>();
  for (E e : options)
    if (to_string(e) == s) return e;
  throw ConfigError("unknown enum value '" + s + "'");
}

}  // namespace

Json to_json(const SceneConfig& c) {
  Json j;
  j["task"] = to_string(c.task);
  j["peg_shape"] = to_string(c.peg_shape);
  j["handle_shape"] = to_string(c.handle_shape);
  j["hole_shape"] = to_string(c.hole_shape);
  j["clearance"] = c.clearance;
  j["hole_pose_known"] = c.hole_pose_known;
  j["init_x"] = range_json(c.init_x);
  j["init_y"] = range_json(c.init_y);
  j["init_z"] = range_json(c.init_z);
  j["offset_x_max"] = c.offset_x_max;
  j["offset_z_max"] = c.offset_z_max;
  j["peg_size"] = c.peg_size;
  j["handle_size"] = c.handle_size;
  j["handle_height"] = c.handle_height;
  j["strip_half_width"] = c.strip_half_width;
  j["peg_length"] = c.peg_length;
  j["com_below_grip"] = c.com_below_grip;
  j["peg_mass"] = c.peg_mass;
  j["gravity"] = c.gravity;
  j["hole_depth"] = c.hole_depth;
  j["grip_force"] = c.grip_force;
  j["k_pen"] = c.k_pen;
  j["contact_mu"] = c.contact_mu;
  j["k_n"] = c.spring.k_n;
  j["k_t"] = c.spring.k_t;
  j["friction_mu"] = c.spring.friction_mu;
  j["sigma_r"] = c.reward.sigma_r;
  j["w_reach"] = c.reward.w_reach;
  j["w_engage"] = c.reward.w_engage;
  j["success_bonus"] = c.reward.success_bonus;
  j["step_penalty"] = c.reward.step_penalty;
  j["success_depth"] = c.success_depth;
  j["action_bound"] = c.action_bound;
  j["max_steps"] = c.max_steps;
  j["workspace_radius"] = c.workspace_radius;
  j["workspace_height"] = c.workspace_height;
  return j;
}

SceneConfig scene_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("scene config must be a JSON object");
  SceneConfig c;
  try {
    c = default_scene(task_from_string(j.at("task").get<std::string>()));
    for (const auto& [key, v] : j.items()) {
      if (key == "task") continue;
      else if (key == "peg_shape") c.peg_shape = enum_from(v, {PegShape::kRound, PegShape::kSquare});
      else if (key == "handle_shape") c.handle_shape = enum_from(v, {HandleShape::kCylinder, HandleShape::kCube});
      else if (key == "hole_shape") c.hole_shape = enum_from(v, {HoleShape::kRound, HoleShape::kSquare, HoleShape::kGrooveX, HoleShape::kGrooveY});
      else if (key == "clearance") c.clearance = v.get<double>();
      else if (key == "hole_pose_known") c.hole_pose_known = v.get<bool>();
      else if (key == "init_x") c.init_x = range_from(v);
      else if (key == "init_y") c.init_y = range_from(v);
      else if (key == "init_z") c.init_z = range_from(v);
      else if (key == "offset_x_max") c.offset_x_max = v.get<double>();
      else if (key == "offset_z_max") c.offset_z_max = v.get<double>();
      else if (key == "peg_size") c.peg_size = v.get<double>();
      else if (key == "handle_size") c.handle_size = v.get<double>();
      else if (key == "handle_height") c.handle_height = v.get<double>();
      else if (key == "strip_half_width") c.strip_half_width = v.get<double>();
      else if (key == "peg_length") c.peg_length = v.get<double>();
      else if (key == "com_below_grip") c.com_below_grip = v.get<double>();
      else if (key == "peg_mass") c.peg_mass = v.get<double>();
      else if (key == "gravity") c.gravity = v.get<double>();
      else if (key == "hole_depth") c.hole_depth = v.get<double>();
      else if (key == "grip_force") c.grip_force = v.get<double>();
      else if (key == "k_pen") c.k_pen = v.get<double>();
      else if (key == "contact_mu") c.contact_mu = v.get<double>();
      else if (key == "k_n") c.spring.k_n = v.get<double>();
      else if (key == "k_t") c.spring.k_t = v.get<double>();
      else if (key == "friction_mu") c.spring.friction_mu = v.get<double>();
      else if (key == "sigma_r") c.reward.sigma_r = v.get<double>();
      else if (key == "w_reach") c.reward.w_reach = v.get<double>();
      else if (key == "w_engage") c.reward.w_engage = v.get<double>();
      else if (key == "success_bonus") c.reward.success_bonus = v.get<double>();
      else if (key == "step_penalty") c.reward.step_penalty = v.get<double>();
      else if (key == "success_depth") c.success_depth = v.get<double>();
      else if (key == "action_bound") c.action_bound = v.get<double>();
      else if (key == "max_steps") c.max_steps = v.get<int>();
      else if (key == "workspace_radius") c.workspace_radius = v.get<double>();
      else if (key == "workspace_height") c.workspace_height = v.get<double>();
      else throw ConfigError("unknown scene config key '" + key + "'");
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("scene config: ") + e.what());
  }
  c.validate();
  return c;
}

SceneConfig load_scene_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene config " + path);
  try {
    return scene_config_from_json(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Vec3 peg_bottom(const SceneState& s, const SceneConfig& c) {
  return s.grip_point() - Vec3(0.0, 0.0, c.peg_length);
}

Vec3 peg_com(const SceneState& s, const SceneConfig& c) {
  return s.grip_point() - Vec3(0.0, 0.0, c.com_below_grip);
}

SceneState place_peg(const SceneConfig& config, const Vec3& bottom,
                     const Vec3& in_hand_offset, SurfaceProfile left,
                     SurfaceProfile right) {
  SceneState s;
  s.in_hand_offset = in_hand_offset;
  s.hand_pos = bottom + Vec3(0.0, 0.0, config.peg_length) - in_hand_offset;
  s.squeeze = config.squeeze();
  s.surface_left = std::move(left);
  s.surface_right = std::move(right);
  return s;
}

SceneState reset_scene(Rng& rng, const SceneConfig& config,
                       SurfaceProfile left, SurfaceProfile right) {
  config.validate();
  Vec3 bottom;
  bottom.x() = rng.uniform(config.init_x.lo, config.init_x.hi);
  bottom.y() = rng.uniform(config.init_y.lo, config.init_y.hi);
  bottom.z() = rng.uniform(config.init_z.lo, config.init_z.hi);
  Vec3 offset = Vec3::Zero();
  offset.x() = rng.uniform(-config.offset_x_max, config.offset_x_max);
  offset.z() = rng.uniform(-config.offset_z_max, config.offset_z_max);
  return place_peg(config, bottom, offset, std::move(left), std::move(right));
}

Wrench wrench_about(const Vec3& point, const Vec3& force, const Vec3& origin) {
  return {force, (point - origin).cross(force)};
}

namespace {

constexpr int kFootprintSamples = 32;

// Cell-centre samples of the peg cross-section, relative to its axis.
const std::vector<Vec2>& footprint(PegShape shape, double size) {
  thread_local std::vector<Vec2> cache;
  thread_local PegShape cached_shape = PegShape::kRound;
  thread_local double cached_size = -1.0;
  if (cached_size == size && cached_shape == shape) return cache;
  cache.clear();
  const double half = size / 2.0;
  const double cell = size / kFootprintSamples;
  for (int a = 0; a < kFootprintSamples; ++a)
    for (int b = 0; b < kFootprintSamples; ++b) {
      const Vec2 p(-half + (a + 0.5) * cell, -half + (b + 0.5) * cell);
      if (shape == PegShape::kSquare || p.norm() <= half) cache.push_back(p);
    }
  cached_shape = shape;
  cached_size = size;
  return cache;
}

bool inside_opening(const Vec2& p, const SceneConfig& c) {
  const double a = c.hole_size() / 2.0;
  switch (c.hole_shape) {
    case HoleShape::kRound: return p.norm() <= a;
    case HoleShape::kSquare: return std::abs(p.x()) <= a && std::abs(p.y()) <= a;
    case HoleShape::kGrooveX: return std::abs(p.y()) <= a;
    case HoleShape::kGrooveY: return std::abs(p.x()) <= a;
  }
  return false;
}

struct WallOverlap {
  Vec2 outward;     // unit, from the hole axis into the wall
  double overlap;   // mm, > 0
  Vec2 wall_point;  // lateral position of the touching wall
};

std::vector<WallOverlap> wall_overlaps(const Vec2& c, const SceneConfig& cfg) {
  std::vector<WallOverlap> out;
  const double half = cfg.peg_size / 2.0;
  const double a = cfg.hole_size() / 2.0;
  if (cfg.hole_shape == HoleShape::kRound) {
    Vec2 far = c;
    double reach = 0.0;
    if (cfg.peg_shape == PegShape::kRound) {
      if (c.norm() == 0.0) return out;
      reach = c.norm() + half;
      far = c / c.norm();
    } else {
      for (double sx : {-1.0, 1.0})
        for (double sy : {-1.0, 1.0}) {
          const Vec2 corner = c + Vec2(sx * half, sy * half);
          if (corner.norm() > reach) {
            reach = corner.norm();
            far = corner / corner.norm();
          }
        }
    }
    if (reach > a) out.push_back({far, reach - a, far * a});
    return out;
  }
  const bool use_x = cfg.hole_shape != HoleShape::kGrooveX;
  const bool use_y = cfg.hole_shape != HoleShape::kGrooveY;
  for (int axis = 0; axis < 2; ++axis) {
    if ((axis == 0 && !use_x) || (axis == 1 && !use_y)) continue;
    const double extent = std::abs(c[axis]) + half;
    if (extent <= a) continue;
    Vec2 dir = Vec2::Zero();
    dir[axis] = c[axis] >= 0.0 ? 1.0 : -1.0;
    Vec2 point = c;
    point[axis] = dir[axis] * a;
    out.push_back({dir, extent - a, point});
  }
  return out;
}

Vec3 friction_force(const Vec3& normal, double normal_force,
                    const Vec3& motion, double mu) {
  const Vec3 tangential = motion - motion.dot(normal) * normal;
  const double n = tangential.norm();
  if (n < 1e-12 || mu == 0.0) return Vec3::Zero();
  return -mu * normal_force * tangential / n;
}

Contact make_contact(ContactKind kind, const Vec3& pos, const Vec3& normal,
                     double penetration, const SceneState& s,
                     const SceneConfig& c) {
  Contact ct;
  ct.kind = kind;
  ct.position = pos;
  ct.normal = normal;
  ct.penetration = penetration;
  const double fn = c.k_pen * penetration;
  ct.force = fn * normal + friction_force(normal, fn, s.last_motion, c.contact_mu);
  return ct;
}

}  // namespace

ContactResult rim_contact(const SceneState& state, const SceneConfig& config) {
  ContactResult result;
  const Vec3 bottom = peg_bottom(state, config);
  if (bottom.z() >= 0.0) return result;

  const Vec2 axis(bottom.x(), bottom.y());
  const double submerged = -bottom.z();
  const auto& samples = footprint(config.peg_shape, config.peg_size);

  const auto walls = wall_overlaps(axis, config);
  double lateral = 0.0;
  for (const auto& w : walls) lateral += w.overlap * w.overlap;
  lateral = std::sqrt(lateral);

  if (!walls.empty() && lateral >= submerged) {
    // Resting on (or pressed into) the rim top: lift is the shorter way out.
    Vec2 sum = Vec2::Zero();
    int n = 0;
    for (const Vec2& s : samples) {
      const Vec2 p = axis + s;
      if (!inside_opening(p, config)) {
        sum += p;
        ++n;
      }
    }
    Vec2 centroid = n > 0 ? Vec2(sum / n) : Vec2(axis + walls.front().outward *
                                                           (config.peg_size / 2.0));
    result.contacts.push_back(make_contact(
        ContactKind::kRimTop, Vec3(centroid.x(), centroid.y(), bottom.z()),
        Vec3::UnitZ(), submerged, state, config));
  } else {
    const double wall_z = std::max(bottom.z(), -config.hole_depth) / 2.0;
    for (const auto& w : walls) {
      const Vec3 normal(-w.outward.x(), -w.outward.y(), 0.0);
      result.contacts.push_back(make_contact(
          ContactKind::kWall, Vec3(w.wall_point.x(), w.wall_point.y(), wall_z),
          normal, w.overlap, state, config));
    }
    if (bottom.z() < -config.hole_depth) {
      Vec2 sum = Vec2::Zero();
      int n = 0;
      for (const Vec2& s : samples) {
        const Vec2 p = axis + s;
        if (inside_opening(p, config)) {
          sum += p;
          ++n;
        }
      }
      const Vec2 centroid = n > 0 ? Vec2(sum / n) : axis;
      result.contacts.push_back(make_contact(
          ContactKind::kFloor, Vec3(centroid.x(), centroid.y(), bottom.z()),
          Vec3::UnitZ(), -config.hole_depth - bottom.z(), state, config));
    }
  }

  for (const Contact& ct : result.contacts) {
    const Wrench w = wrench_about(ct.position, ct.force, state.hand_pos);
    result.wrench.force += w.force;
    result.wrench.torque += w.torque;
  }
  return result;
}

double lateral_error(const SceneState& state, const SceneConfig& config) {
  const Vec3 b = peg_bottom(state, config);
  switch (config.hole_shape) {
    case HoleShape::kRound: return std::hypot(b.x(), b.y());
    case HoleShape::kSquare: return std::max(std::abs(b.x()), std::abs(b.y()));
    case HoleShape::kGrooveX: return std::abs(b.y());
    case HoleShape::kGrooveY: return std::abs(b.x());
  }
  return 0.0;
}

}  // namespace tacsim
