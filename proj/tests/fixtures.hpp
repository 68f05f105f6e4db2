#pragma once

// Random inputs shared by the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "tacsim/augment.hpp"
#include "tacsim/equilibrium.hpp"
#include "tacsim/rng.hpp"
#include "tacsim/scene.hpp"

namespace fixture {

using namespace tacsim;

inline std::vector<ContactPoint> random_contacts(std::mt19937_64& rng, int n,
                                                 const SensorGeometry& g,
                                                 bool dyadic) {
  std::uniform_real_distribution<double> ux(0.0, g.bounds().x());
  std::uniform_real_distribution<double> uy(0.0, g.bounds().y());
  std::normal_distribution<double> nf(0.0, 3.0);
  std::vector<ContactPoint> cs;
  for (int k = 0; k < n; ++k) {
    ContactPoint c;
    c.position = Vec2(ux(rng), uy(rng));
    for (int a = 0; a < 3; ++a)
      c.force[a] = dyadic ? oracle::dyadic(rng) : nf(rng);
    cs.push_back(c);
  }
  return cs;
}

inline SceneState placed(const SceneConfig& c, const Vec3& bottom,
                         const Vec3& offset = Vec3::Zero(),
                         const SurfaceProfile& left = flat_surface(1.0),
                         const SurfaceProfile& right = flat_surface(1.0)) {
  return place_peg(c, bottom, offset, left, right);
}

// Random scene with sampled surfaces and a moderate external load applied
// near the peg bottom.
struct RandomScene {
  SceneConfig config;
  SceneState state;
  Wrench external;
};

inline RandomScene random_scene(Rng& rng) {
  RandomScene r;
  const auto& tasks = all_tasks();
  r.config = default_scene(tasks[rng.next_u64() % tasks.size()]);
  DrConfig dr;
  const Vec3 offset(rng.uniform(-3, 3), 0.0, rng.uniform(-3, 3));
  r.state = placed(r.config, Vec3(rng.uniform(-15, 15), rng.uniform(-15, 15), 10.0),
                   offset, build_surface(rng, dr), build_surface(rng, dr));
  const Vec3 f(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-2, 8));
  const Vec3 at = peg_bottom(r.state, r.config) +
                  Vec3(rng.uniform(-10, 10), rng.uniform(-10, 10), 0.0);
  r.external = wrench_about(at, f, r.state.hand_pos);
  return r;
}

// Cubes as the oracle sees them, with modes from the solver's active set.
inline std::vector<oracle::Cube> oracle_cubes(const SceneState& s, const SceneConfig& c,
                                       const EquilibriumResult& res) {
  const auto layout = layout_taxels(s, c, c.spring);
  std::vector<oracle::Cube> cubes;
  const std::array<double, 6> u{res.displacement[0], res.displacement[1],
                                res.displacement[2], res.displacement[3],
                                res.displacement[4], res.displacement[5]};
  for (std::size_t k = 0; k < layout.size(); ++k) {
    const auto& t = layout[k];
    oracle::Cube cube;
    const bool left = t.pad == Pad::kLeft;
    cube.r = oracle::cube_position(left, t.row, t.col, c.handle_size / 2.0, 4.7);
    for (int a = 0; a < 3; ++a)
      if (std::abs(cube.r[a] - t.r[a]) > 1e-12)
        throw std::logic_error("solver and oracle disagree on cube positions");
    cube.nu = left ? oracle::V3{0, -1, 0} : oracle::V3{0, 1, 0};
    cube.preload = t.preload;
    cube.mode = res.modes[k] == TaxelMode::kSeparated ? 0
                : res.modes[k] == TaxelMode::kStick   ? 1
                                                      : 2;
    if (cube.mode == 2) {
      const oracle::V3 th{u[3], u[4], u[5]};
      const oracle::V3 rot = oracle::cross(th, cube.r);
      oracle::V3 d{u[0] + rot[0], u[1] + rot[1], u[2] + rot[2]};
      const double into = oracle::dot(cube.nu, d);
      oracle::V3 trial;
      for (int a = 0; a < 3; ++a) trial[a] = -(d[a] - into * cube.nu[a]);
      const double n = std::sqrt(oracle::dot(trial, trial));
      for (int a = 0; a < 3; ++a) cube.slide[a] = trial[a] / n;
    }
    cubes.push_back(cube);
  }
  return cubes;
}

inline std::array<double, 6> oracle_load(const SceneState& s, const SceneConfig& c,
                                  const Wrench& ext) {
  // Weight at the centre of mass, torque about the fingertip centre.
  const oracle::V3 r{s.in_hand_offset.x(), s.in_hand_offset.y(),
                     s.in_hand_offset.z() - c.com_below_grip};
  const oracle::V3 w{0.0, 0.0, -c.peg_mass * c.gravity};
  const oracle::V3 t = oracle::cross(r, w);
  return {ext.force.x() + w[0], ext.force.y() + w[1], ext.force.z() + w[2],
          ext.torque.x() + t[0], ext.torque.y() + t[1], ext.torque.z() + t[2]};
}

}  // namespace fixture
