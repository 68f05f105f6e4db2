#include <doctest.h>

#include <cmath>

#include "tacsim/episode.hpp"
#include "tacsim/errors.hpp"
#include "tacsim/features.hpp"
#include "tacsim/rng.hpp"

using namespace tacsim;

namespace {

SceneState placed(const SceneConfig& c, const Vec3& bottom,
                  const Vec3& offset = Vec3::Zero()) {
  return place_peg(c, bottom, offset, flat_surface(1.0), flat_surface(1.0));
}

}  // namespace

TEST_CASE("task catalogue") {
  CHECK(all_tasks().size() == 6);
  for (TaskId t : all_tasks()) {
    const SceneConfig c = default_scene(t);
    CHECK_NOTHROW(c.validate());
    CHECK(task_from_string(to_string(t)) == t);
    const bool groove = t == TaskId::kSX2mm || t == TaskId::kSY2mm;
    CHECK(c.hole_pose_known == !groove);
  }
  CHECK(default_scene(TaskId::kSQ1mm).clearance == 1.0);
  CHECK(default_scene(TaskId::kRY2mm).handle_shape == HandleShape::kCylinder);
  CHECK(default_scene(TaskId::kRU2mm).handle_shape == HandleShape::kCube);
  try {
    task_from_string("XX-9mm");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const char* id : {"RY-2mm", "RU-2mm", "SQ-2mm", "SQ-1mm", "SX-2mm", "SY-2mm"})
      CHECK(msg.find(id) != std::string::npos);
  }
  SceneConfig bad = default_scene(TaskId::kSX2mm);
  bad.hole_pose_known = true;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = default_scene(TaskId::kRY2mm);
  bad.clearance = 3.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const SceneConfig c = default_scene(TaskId::kSY2mm);
  CHECK(scene_config_from_json(to_json(c)) == c);
  CHECK_THROWS_AS(scene_config_from_json(Json::parse(R"({"task":"SQ-2mm","nope":1})")),
                  ConfigError);
}

TEST_CASE("reset samples the init box uniformly") {
  const SceneConfig c = default_scene(TaskId::kRY2mm);
  Rng rng(77);
  const int n = 10000;
  std::array<std::array<int, 10>, 3> bins{};
  const std::array<Range, 3> box{c.init_x, c.init_y, c.init_z};
  for (int k = 0; k < n; ++k) {
    const SceneState s = reset_scene(rng, c, flat_surface(1.0), flat_surface(1.0));
    const Vec3 b = peg_bottom(s, c);
    for (int a = 0; a < 3; ++a) {
      REQUIRE(b[a] >= box[a].lo - 1e-12);
      REQUIRE(b[a] <= box[a].hi + 1e-12);
      const double u = (b[a] - box[a].lo) / (box[a].hi - box[a].lo);
      ++bins[a][std::min(9, static_cast<int>(u * 10))];
    }
    REQUIRE(std::abs(s.in_hand_offset.x()) <= c.offset_x_max);
    REQUIRE(s.in_hand_offset.y() == 0.0);
    REQUIRE(s.squeeze == 30.0);
  }
  // KS-style bound on the binned empirical CDF.
  for (int a = 0; a < 3; ++a) {
    double cdf = 0.0, worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      cdf += bins[a][k] / static_cast<double>(n);
      worst = std::max(worst, std::abs(cdf - (k + 1) / 10.0));
    }
    CHECK(worst < 1.63 / std::sqrt(n));
  }
  Rng r1(5), r2(5);
  const auto s1 = reset_scene(r1, c, flat_surface(1.0), flat_surface(1.0));
  const auto s2 = reset_scene(r2, c, flat_surface(1.0), flat_surface(1.0));
  CHECK(s1.hand_pos == s2.hand_pos);
  CHECK(s1.in_hand_offset == s2.in_hand_offset);
}

TEST_CASE("rim contact geometry") {
  const SceneConfig sq = default_scene(TaskId::kSQ2mm);
  // Above the base: nothing.
  auto r = rim_contact(placed(sq, Vec3(0, 0, 5)), sq);
  CHECK(r.contacts.empty());
  CHECK(r.wrench.force.norm() == 0.0);
  // Inside, centred, above the floor: nothing.
  r = rim_contact(placed(sq, Vec3(0, 0, -8)), sq);
  CHECK(r.contacts.empty());

  // Overlapping the back wall (at -x) by delta while submerged deeper.
  const double delta = 0.4;
  const double half_gap = sq.clearance / 2.0;
  const SceneState s = placed(sq, Vec3(-half_gap - delta, 0, -3));
  r = rim_contact(s, sq);
  REQUIRE(r.contacts.size() == 1);
  const Contact& ct = r.contacts[0];
  CHECK(ct.kind == ContactKind::kWall);
  CHECK(ct.force.x() == doctest::Approx(sq.k_pen * delta));
  CHECK(ct.force.y() == 0.0);
  CHECK(ct.force.z() == 0.0);
  // A forward push below the fingertips pitches the peg about -y.
  CHECK(r.wrench.torque.y() < 0.0);
  CHECK(r.wrench.torque.x() == 0.0);

  // Landing on the front rim: one upward contact at the overlap.
  const SceneState top = placed(sq, Vec3(4.0, 0, -0.5));
  r = rim_contact(top, sq);
  REQUIRE(r.contacts.size() == 1);
  CHECK(r.contacts[0].kind == ContactKind::kRimTop);
  CHECK(r.contacts[0].force.z() == doctest::Approx(sq.k_pen * 0.5));
  CHECK(r.contacts[0].position.x() > sq.hole_size() / 2.0);

  // Floor contact past the hole depth.
  r = rim_contact(placed(sq, Vec3(0, 0, -sq.hole_depth - 0.2)), sq);
  REQUIRE(r.contacts.size() == 1);
  CHECK(r.contacts[0].kind == ContactKind::kFloor);
  CHECK(r.contacts[0].force.z() == doctest::Approx(sq.k_pen * 0.2));

  // Sliding friction opposes the last motion.
  SceneState moving = top;
  moving.last_motion = Vec3(0.0, 1.0, 0.0);
  r = rim_contact(moving, sq);
  CHECK(r.contacts[0].force.y() == doctest::Approx(-sq.contact_mu * sq.k_pen * 0.5));

  // Grooves only constrain one axis.
  const SceneConfig sx = default_scene(TaskId::kSX2mm);
  CHECK(rim_contact(placed(sx, Vec3(30.0, 0, -2)), sx).contacts.empty());
  CHECK(!rim_contact(placed(sx, Vec3(0, 4.0, -0.5)), sx).contacts.empty());
}

TEST_CASE("reward and success") {
  const SceneConfig c = default_scene(TaskId::kSQ2mm);
  const SceneState half = placed(c, Vec3(0, 0, -c.success_depth / 2.0));
  CHECK(engagement_term(half, c) == doctest::Approx(0.5));
  CHECK(reward(half, c) == doctest::Approx(
                               std::exp(-c.success_depth / 2.0 / c.reward.sigma_r) + 0.5));
  const SceneState deep = placed(c, Vec3(0, 0, -10));
  CHECK(check_success(deep, c));
  CHECK(reward(deep, c) >= c.reward.success_bonus);
  CHECK(!check_success(placed(c, Vec3(0, 0, 1)), c));
  CHECK(!check_success(placed(c, Vec3(c.clearance + 0.1, 0, -5)), c));
  CHECK(check_success(placed(c, Vec3(0.2, 0, -5)), c));

  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const Vec3 dir = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.1, 1)).normalized();
    const double d1 = rng.uniform(0.1, 40), d2 = rng.uniform(0.1, 40);
    const double r1 = reaching_term(placed(c, dir * d1), c);
    const double r2 = reaching_term(placed(c, dir * d2), c);
    CHECK((d1 < d2) == (r1 > r2));
  }
}

TEST_CASE("action clipping") {
  const Vec3 a = clip_action(Vec3(5.0, -0.5, -9.0), 2.0);
  CHECK(a == Vec3(2.0, -0.5, -2.0));
  CHECK_THROWS_AS(clip_action(Vec3(NAN, 0, 0), 2.0), DataError);

  Episode ep(default_scene(TaskId::kRY2mm), DrConfig{}, 4);
  ep.reset();
  Rng rng(9);
  for (int k = 0; k < 30 && !ep.done(); ++k) {
    const Vec3 before = ep.state().hand_pos;
    ep.step(Vec3(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9)));
    CHECK((ep.state().hand_pos - before).cwiseAbs().maxCoeff() <= 2.0);
  }
}

TEST_CASE("episode lifecycle and determinism") {
  const SceneConfig c = default_scene(TaskId::kRY2mm);
  Episode a(c, DrConfig{}, 123), b(c, DrConfig{}, 123);
  CHECK_THROWS_AS(a.step(Vec3::Zero()), LifecycleError);
  a.reset();
  b.reset();
  CHECK(a.params_left() == b.params_left());
  CHECK(a.last().raw == b.last().raw);
  for (int k = 0; k < 10; ++k) {
    const Vec3 act(0.3 * k, -0.2, -1.0);
    const auto& sa = a.step(act);
    const auto& sb = b.step(act);
    CHECK(sa.raw == sb.raw);
    CHECK(sa.augmented == sb.augmented);
    CHECK(sa.reward == sb.reward);
  }

  // Zero action above the base: a fixed point.
  Episode z(c, DrConfig{}, 9);
  z.reset();
  const auto first = z.step(Vec3::Zero());
  REQUIRE(!first.done);
  CHECK(peg_bottom(z.state(), c).z() > 0.0);
  const auto second = z.step(Vec3::Zero());
  CHECK(second.raw == first.raw);
  CHECK(second.augmented == first.augmented);
  CHECK(second.reward == first.reward);
  CHECK(second.reward < reward(z.state(), c));

  // Timeout ends the episode; stepping after done fails until reset.
  SceneConfig short_c = c;
  short_c.max_steps = 3;
  Episode t(short_c, DrConfig{}, 2);
  t.reset();
  t.step(Vec3::Zero());
  t.step(Vec3::Zero());
  const auto last = t.step(Vec3::Zero());
  CHECK(last.done);
  CHECK(last.termination == Termination::kTimeout);
  CHECK_THROWS_AS(t.step(Vec3::Zero()), LifecycleError);
  t.reset();
  CHECK_NOTHROW(t.step(Vec3::Zero()));
}

TEST_CASE("scripted insertion succeeds and pays the bonus once") {
  for (TaskId task : {TaskId::kSQ2mm, TaskId::kRY2mm, TaskId::kSQ1mm}) {
    const SceneConfig c = default_scene(task);
    Episode ep(c, DrConfig{}, 31);
    ep.reset();
    int bonuses = 0;
    for (int k = 0; k < c.max_steps && !ep.done(); ++k) {
      const Vec3 b = peg_bottom(ep.state(), c);
      Vec3 act(-b.x(), -b.y(), 0.0);
      if (std::hypot(b.x(), b.y()) < 1e-9) act.z() = -1.0;
      const auto& r = ep.step(act);
      if (r.reward >= c.reward.success_bonus) ++bonuses;
    }
    CHECK(ep.last().success);
    CHECK(ep.last().termination == Termination::kSuccess);
    CHECK(bonuses == 1);
  }
}

TEST_CASE("hidden hole pose zeroes the pose channel") {
  for (TaskId task : {TaskId::kSX2mm, TaskId::kSY2mm}) {
    const SceneConfig c = default_scene(task);
    Episode ep(c, DrConfig{}, 1);
    ep.reset();
    CHECK(relative_pose(ep.state(), c) == Vec3::Zero());
  }
  const SceneConfig c = default_scene(TaskId::kRU2mm);
  const SceneState s = placed(c, Vec3(1, 2, 3));
  CHECK(relative_pose(s, c) == -s.hand_pos);
}
