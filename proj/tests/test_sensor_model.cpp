#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tacsim/errors.hpp"
#include "tacsim/frame_io.hpp"
#include "tacsim/sensor_model.hpp"

using namespace tacsim;
using namespace fixture;

TEST_CASE("taxel centres follow the tiling") {
  const SensorGeometry g;
  const double p = g.pooled_pitch;
  CHECK(taxel_center(0, 0, g, Resolution::kPooled) == Vec2(p / 2, p / 2));
  const Vec2 step = taxel_center(0, 1, g, Resolution::kPooled) -
                    taxel_center(0, 0, g, Resolution::kPooled);
  CHECK(step.x() == doctest::Approx(p));
  CHECK(step.y() == 0.0);
  const Vec2 far = taxel_center(5, 4, g, Resolution::kPooled);
  CHECK(far.x() == doctest::Approx(g.tiling_extent().x() - p / 2));
  CHECK(far.y() == doctest::Approx(g.tiling_extent().y() - p / 2));
  CHECK(taxel_center(11, 9, g, Resolution::kRaw).x() ==
        doctest::Approx(g.tiling_extent().x() - g.raw_pitch() / 2));
  CHECK_THROWS_AS(taxel_center(6, 0, g, Resolution::kPooled), IndexError);
  CHECK_THROWS_AS(taxel_center(0, -1, g, Resolution::kRaw), IndexError);
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("binning examples") {
  const SensorGeometry g;
  const TaxelFrame empty = bin_contacts({}, g);
  CHECK(empty.is_shape(12, 10));
  for (double v : empty.data()) CHECK(v == 0.0);

  const Vec2 c = taxel_center(3, 4, g, Resolution::kRaw);
  std::vector<ContactPoint> two{{c + Vec2(0.3, -0.2), Vec3(0, 0, 1)},
                                {c - Vec2(0.5, 0.5), Vec3(0, 0, 2)}};
  const TaxelFrame f = bin_contacts(two, g);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 10; ++j)
      for (int a = 0; a < 3; ++a)
        CHECK(f(i, j, a) == ((i == 3 && j == 4 && a == 2) ? 3.0 : 0.0));

  // Shared edge between (2, 3) and (2, 4) goes to the lower column.
  const double edge = 4 * g.raw_pitch();
  const Vec2 on_edge(edge, taxel_center(2, 3, g, Resolution::kRaw).y());
  CHECK(taxel_index(on_edge, g, Resolution::kRaw) == std::array<int, 2>{2, 3});
  const Vec2 corner(edge, 3 * g.raw_pitch());
  CHECK(taxel_index(corner, g, Resolution::kRaw) == std::array<int, 2>{2, 3});
  CHECK(taxel_index(Vec2(0, 0), g, Resolution::kRaw) == std::array<int, 2>{0, 0});

  std::vector<ContactPoint> bad{{Vec2(-0.01, 1.0), Vec3(1, 0, 0)}};
  CHECK_THROWS_AS(bin_contacts(bad, g), RejectedContactError);
  bad[0].position = Vec2(1.0, g.bounds().y() + 1e-9);
  CHECK_THROWS_AS(bin_contacts(bad, g), RejectedContactError);
  try {
    bin_contacts(bad, g);
  } catch (const RejectedContactError& e) {
    CHECK(std::string(e.what()).find("outside") != std::string::npos);
  }
}

TEST_CASE("every in-bounds position belongs to exactly one taxel") {
  const SensorGeometry g;
  for (Resolution r : {Resolution::kRaw, Resolution::kPooled}) {
    const int rows = g.rows(r), cols = g.cols(r);
    const double p = g.pitch(r);
    // The sweep includes every footprint edge exactly.
    const int steps_x = cols * 20, steps_y = rows * 20;
    for (int a = 0; a <= steps_x; ++a)
      for (int b = 0; b <= steps_y; ++b) {
        const double x = a * (p / 20.0);
        const double y = b * (p / 20.0);
        const auto hits = oracle::containing(x, y, rows, cols, p);
        REQUIRE(hits.size() == 1);
        REQUIRE(taxel_index(Vec2(x, y), g, r) == hits[0]);
      }
  }
}

TEST_CASE("binning conserves totals bit-exactly") {
  const SensorGeometry g;
  std::mt19937_64 rng(11);
  for (int inst = 0; inst < 1000; ++inst) {
    const auto cs = random_contacts(rng, 1 + inst % 60, g, true);
    const TaxelFrame raw = bin_contacts(cs, g);
    const auto want = oracle::contact_totals(cs);
    const auto got = raw.totals();
    for (int a = 0; a < 3; ++a) REQUIRE(got[a] == want[a]);
    const auto pooled = sum_pool_2x2(raw, g).totals();
    for (int a = 0; a < 3; ++a) REQUIRE(pooled[a] == want[a]);
  }
}

TEST_CASE("binning matches the per-point oracle exactly for general forces") {
  const SensorGeometry g;
  std::mt19937_64 rng(12);
  for (int inst = 0; inst < 300; ++inst) {
    const auto cs = random_contacts(rng, 1 + inst % 40, g, false);
    const TaxelFrame raw = bin_contacts(cs, g);
    CHECK(raw == oracle::bin(cs, 12, 10, g.raw_pitch()));
    const TaxelFrame pooled = sum_pool_2x2(raw, g);
    CHECK(pooled == oracle::pool(raw));
    const auto want = oracle::contact_totals(cs);
    for (int a = 0; a < 3; ++a)
      CHECK(pooled.totals()[a] == doctest::Approx(want[a]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("pooling") {
  const SensorGeometry g;
  TaxelFrame raw = TaxelFrame::raw(g);
  const TaxelFrame empty = sum_pool_2x2(raw, g);
  for (double v : empty.data()) CHECK(v == 0.0);
  raw(0, 0, 2) = raw(0, 1, 2) = raw(1, 0, 2) = raw(1, 1, 2) = 1.0;
  const TaxelFrame p = sum_pool_2x2(raw, g);
  CHECK(p.is_shape(6, 5));
  CHECK(p(0, 0, 2) == 4.0);
  CHECK(p.totals()[2] == 4.0);
  CHECK_THROWS_AS(sum_pool_2x2(TaxelFrame::pooled(g), g), ShapeError);
}

TEST_CASE("bin-then-pool equals direct pooled binning") {
  const SensorGeometry g;
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> ri(0, 11), rj(0, 9);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int inst = 0; inst < 1000; ++inst) {
    std::vector<ContactPoint> cs;
    const int n = 1 + inst % 25;
    for (int k = 0; k < n; ++k) {
      const int i = ri(rng), j = rj(rng);
      ContactPoint c;
      // Strictly inside raw taxel (i, j).
      c.position = Vec2((j + frac(rng)) * g.raw_pitch(), (i + frac(rng)) * g.raw_pitch());
      for (int a = 0; a < 3; ++a) c.force[a] = oracle::dyadic(rng);
      cs.push_back(c);
    }
    const TaxelFrame a = sum_pool_2x2(bin_contacts(cs, g, Resolution::kRaw), g);
    const TaxelFrame b = bin_contacts(cs, g, Resolution::kPooled);
    REQUIRE(a == b);
  }
}

TEST_CASE("frame records round-trip exactly") {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> n(0.0, 1.0);
  FrameRecord rec;
  rec.pad_id = "right";
  rec.frame = TaxelFrame::pooled();
  for (double& v : rec.frame.data()) v = n(rng) * 1e-3 + 1.0 / 3.0;
  rec.frame(0, 0, 0) = 5e-324;
  rec.frame(1, 1, 1) = -0.0;
  rec.episode = 4;
  rec.stage = "raw";
  std::stringstream ss;
  write_frame_record(ss, rec);
  write_frame_record(ss, rec);
  const auto back = read_frame_records(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].frame == rec.frame);
  CHECK(back[0].pad_id == "right");
  CHECK(back[0].episode == 4);
  CHECK(!back[0].step.has_value());

  std::stringstream bad("{\"pad_id\":\"left\",\"resolution\":\"pooled\",\"rows\":6,"
                        "\"cols\":5,\"forces\":[]}\n");
  std::stringstream two;
  write_frame_record(two, rec);
  two << bad.str();
  try {
    read_frame_records(two);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
  }
}
