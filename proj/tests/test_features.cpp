#include <doctest.h>

#include <random>

#include "tacsim/errors.hpp"
#include "tacsim/features.hpp"

using namespace tacsim;

namespace {

PadFrames random_frames(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  PadFrames p{TaxelFrame::pooled(), TaxelFrame::pooled()};
  for (double& v : p.left.data()) v = n(rng);
  for (double& v : p.right.data()) v = n(rng);
  return p;
}

std::vector<PadFrames> random_stream(std::mt19937_64& rng, int n) {
  std::vector<PadFrames> s;
  for (int k = 0; k < n; ++k) s.push_back(random_frames(rng));
  return s;
}

}  // namespace

TEST_CASE("feature mode names") {
  for (auto m : {FeatureMode::kNT, FeatureMode::kTF, FeatureMode::kTB, FeatureMode::kDT,
                 FeatureMode::kGCS})
    CHECK(feature_mode_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(feature_mode_from_string("XYZ"), ConfigError);
}

TEST_CASE("total force") {
  std::vector<PadFrames> zero(3, PadFrames{TaxelFrame::pooled(), TaxelFrame::pooled()});
  const Tensor z = total_force(zero);
  CHECK(z.shape == std::vector<int>{18});
  for (double v : z.data) CHECK(v == 0.0);

  PadFrames one{TaxelFrame::pooled(), TaxelFrame::pooled()};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 5; ++j) one.left(i, j, 2) = 0.1;
  const Tensor t = total_force(std::vector<PadFrames>{one});
  CHECK(t.data[2] == doctest::Approx(3.0));

  std::mt19937_64 rng(1);
  const auto hist = random_stream(rng, 4);
  const Tensor tf = total_force(hist);
  for (int k = 0; k < 4; ++k)
    for (int p = 0; p < 2; ++p)
      for (int a = 0; a < 3; ++a) {
        const TaxelFrame& f = p == 0 ? hist[k].left : hist[k].right;
        double s = 0.0;
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 5; ++j) s += f(i, j, a);
        CHECK(std::abs(tf.data[k * 6 + p * 3 + a] - s) <= 1e-12);
      }

  // Contraction of the stacked tensor over the grid gives the same vector.
  const Tensor st = stack_history(hist, 4);
  for (int ch = 0; ch < 24; ++ch) {
    double s = 0.0;
    for (int c = 0; c < 30; ++c) s += st.data[ch * 30 + c];
    CHECK(std::abs(tf.data[ch] - s) <= 1e-12);
  }
}

TEST_CASE("binarize") {
  PadFrames p{TaxelFrame::pooled(), TaxelFrame::pooled()};
  p.left(0, 0, 2) = 0.05;
  p.left(0, 1, 2) = 0.3;
  p.left(0, 2, 2) = 0.1;
  p.right(5, 4, 2) = -0.2;
  p.right(5, 3, 0) = 5.0;  // shear ignored
  const Tensor b = binarize(std::vector<PadFrames>{p});
  CHECK(b.shape == std::vector<int>{2, 6, 5});
  CHECK(b.data[0] == 0.0);
  CHECK(b.data[1] == 1.0);
  CHECK(b.data[2] == 1.0);
  CHECK(b.data[30 + 29] == 1.0);
  CHECK(b.data[30 + 28] == 0.0);

  std::mt19937_64 rng(2);
  const auto hist = random_stream(rng, 3);
  const Tensor tb = binarize(hist, 0.4);
  for (int k = 0; k < 3; ++k)
    for (int pad = 0; pad < 2; ++pad)
      for (int c = 0; c < 30; ++c) {
        const TaxelFrame& f = pad == 0 ? hist[k].left : hist[k].right;
        const double want = std::abs(f(c / 5, c % 5, 2)) >= 0.4 ? 1.0 : 0.0;
        CHECK(tb.data[(k * 2 + pad) * 30 + c] == want);
      }

  // Re-thresholding the mask, scaled to forces, reproduces it.
  std::vector<PadFrames> as_forces = hist;
  for (int k = 0; k < 3; ++k)
    for (int pad = 0; pad < 2; ++pad) {
      TaxelFrame& f = pad == 0 ? as_forces[k].left : as_forces[k].right;
      for (int c = 0; c < 30; ++c) f(c / 5, c % 5, 2) = tb.data[(k * 2 + pad) * 30 + c];
    }
  CHECK(binarize(as_forces, 0.4) == tb);
}

TEST_CASE("history stacking") {
  std::mt19937_64 rng(3);
  const auto stream = random_stream(rng, 7);
  const Tensor one = stack_history(std::span(stream).first(1), 3);
  CHECK(one.shape == std::vector<int>{18, 6, 5});
  for (int k = 1; k < 3; ++k)
    for (int c = 0; c < 180; ++c) CHECK(one.data[k * 180 + c] == one.data[c]);

  const Tensor st = stack_history(stream, 3);
  for (int k = 0; k < 3; ++k) {
    const PadFrames& want = stream[4 + k];
    for (int pad = 0; pad < 2; ++pad)
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 30; ++c) {
          const TaxelFrame& f = pad == 0 ? want.left : want.right;
          CHECK(st.data[((k * 2 + pad) * 3 + a) * 30 + c] == f(c / 5, c % 5, a));
        }
  }
  CHECK(stack_history(stream, 1).shape == std::vector<int>{6, 6, 5});
  CHECK_THROWS_AS(stack_history(stream, 0), ShapeError);
  CHECK_THROWS_AS(stack_history(std::span<const PadFrames>{}, 2), ShapeError);
}

TEST_CASE("shape contracts for every mode") {
  std::mt19937_64 rng(4);
  const SceneConfig c = default_scene(TaskId::kRY2mm);
  const SceneState s = place_peg(c, Vec3(1, 2, 3), Vec3::Zero(), flat_surface(1.0),
                                 flat_surface(1.0));
  const auto raw = random_stream(rng, 5);
  const auto aug = random_stream(rng, 5);
  for (int k : {1, 2, 3, 8}) {
    const auto nt = assemble_observation(FeatureMode::kNT, s, c, raw, aug, k);
    CHECK(nt.tactile.empty());
    CHECK(nt.pose == -s.hand_pos);
    CHECK(assemble_observation(FeatureMode::kTF, s, c, raw, aug, k).tactile.shape ==
          std::vector<int>{6 * k});
    CHECK(assemble_observation(FeatureMode::kTB, s, c, raw, aug, k).tactile.shape ==
          std::vector<int>{2 * k, 6, 5});
    const auto dt = assemble_observation(FeatureMode::kDT, s, c, raw, aug, k);
    const auto gcs = assemble_observation(FeatureMode::kGCS, s, c, raw, aug, k);
    CHECK(dt.tactile.shape == std::vector<int>{6 * k, 6, 5});
    CHECK(gcs.tactile.shape == std::vector<int>{6 * k, 6, 5});
    CHECK(dt.tactile == stack_history(raw, k));
    CHECK(gcs.tactile == stack_history(aug, k));
    CHECK(observation_from_json(to_json(gcs)).tactile == gcs.tactile);
  }
  const SceneConfig sx = default_scene(TaskId::kSX2mm);
  for (auto m : {FeatureMode::kNT, FeatureMode::kGCS})
    CHECK(assemble_observation(m, s, sx, raw, aug, 3).pose == Vec3::Zero());
}

TEST_CASE("GCS and DT differ exactly by augment_frame") {
  Episode ep(default_scene(TaskId::kSQ2mm), DrConfig{}, 17);
  const auto& r = ep.reset();
  const std::vector<PadFrames> raw{r.raw}, aug{r.augmented};
  const auto dt = assemble_observation(FeatureMode::kDT, ep.state(), ep.scene(), raw, aug, 1);
  const auto gcs =
      assemble_observation(FeatureMode::kGCS, ep.state(), ep.scene(), raw, aug, 1);
  const std::vector<PadFrames> redo{{augment_frame(r.raw.left, ep.params_left()),
                                     augment_frame(r.raw.right, ep.params_right())}};
  CHECK(gcs.tactile == stack_history(redo, 1));
  CHECK(dt.tactile != gcs.tactile);
}

TEST_CASE("pad-level signatures") {
  TaxelFrame f = TaxelFrame::pooled();
  // Counterclockwise swirl: +y shear right of centre, -y shear left of it.
  f(2, 4, 1) = 1.0;
  f(2, 0, 1) = -1.0;
  CHECK(shear_rotation(f) > 0.0);
  TaxelFrame n = TaxelFrame::pooled();
  n(0, 2, 2) = 3.0;
  n(5, 2, 2) = 1.0;
  CHECK(normal_centroid(n).y() < 0.0);
  CHECK(normal_centroid(TaxelFrame::pooled()) == Vec2::Zero());
}
