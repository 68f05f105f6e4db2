#include "tacsim/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/LU>

#include "tacsim/errors.hpp"

namespace tacsim {

PadAxes pad_axes(Pad pad) {
  if (pad == Pad::kLeft) return {Vec3::UnitX(), Vec3::UnitZ(), -Vec3::UnitY()};
  return {-Vec3::UnitX(), Vec3::UnitZ(), Vec3::UnitY()};
}

std::vector<double> water_fill_preload(const std::vector<double>& engagement,
                                       double squeeze, double k_n) {
  const std::size_t n = engagement.size();
  std::vector<double> preload(n, 0.0);
  if (n == 0) return preload;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return engagement[a] > engagement[b];
  });
  // Closing displacement d with sum_t max(0, d + e_t) = squeeze / k_n.
  const double target = squeeze / k_n;
  double prefix = 0.0;
  double closing = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    prefix += engagement[order[m - 1]];
    closing = (target - prefix) / static_cast<double>(m);
    const bool next_idle =
        m == n || closing + engagement[order[m]] <= 0.0;
    if (closing + engagement[order[m - 1]] > 0.0 && next_idle) break;
  }
  for (std::size_t t = 0; t < n; ++t)
    preload[t] = std::max(0.0, closing + engagement[t]);
  return preload;
}

std::vector<TaxelSpring> layout_taxels(const SceneState& state,
                                       const SceneConfig& config,
                                       const TaxelSpringModel& model,
                                       const SensorGeometry& g) {
  const int rows = g.pooled_rows;
  const int cols = g.pooled_cols;
  const double p = g.pooled_pitch;
  const double d = config.handle_size / 2.0;
  const double patch_x = config.handle_shape == HandleShape::kCube
                             ? config.handle_size / 2.0
                             : config.strip_half_width;
  const double patch_z = config.handle_height / 2.0;
  const Vec3& o = state.in_hand_offset;

  // Mirror pairs are adjacent: left (i, j) then right (i, cols-1-j).
  std::vector<TaxelSpring> taxels;
  taxels.reserve(static_cast<std::size_t>(2 * rows * cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (Pad pad : {Pad::kLeft, Pad::kRight}) {
        TaxelSpring t;
        t.pad = pad;
        t.row = i;
        t.col = pad == Pad::kLeft ? j : cols - 1 - j;
        const double x_off = (t.col - (cols - 1) / 2.0) * p;
        const double z_off = (t.row - (rows - 1) / 2.0) * p;
        const PadAxes ax = pad_axes(pad);
        t.r = x_off * ax.x + z_off * ax.y - d * ax.normal;
        t.covered = std::abs(t.r.x() - o.x()) <= patch_x &&
                    std::abs(t.r.z() - o.z()) <= patch_z;
        taxels.push_back(t);
      }

  for (Pad pad : {Pad::kLeft, Pad::kRight}) {
    const SurfaceProfile& surf =
        pad == Pad::kLeft ? state.surface_left : state.surface_right;
    if (surf.depths.rows() != rows || surf.depths.cols() != cols)
      throw ShapeError("surface profile does not match the pooled grid");
    std::vector<std::size_t> idx;
    double min_depth = 0.0;
    for (std::size_t k = 0; k < taxels.size(); ++k) {
      const auto& t = taxels[k];
      if (t.pad != pad || !t.covered) continue;
      const double h = surf.depths(t.row, t.col);
      min_depth = idx.empty() ? h : std::min(min_depth, h);
      idx.push_back(k);
    }
    std::vector<double> engagement;
    engagement.reserve(idx.size());
    for (std::size_t k : idx)
      engagement.push_back(surf.depths(taxels[k].row, taxels[k].col) - min_depth);
    const auto preload = water_fill_preload(engagement, state.squeeze, model.k_n);
    for (std::size_t m = 0; m < idx.size(); ++m) taxels[idx[m]].preload = preload[m];
  }
  return taxels;
}

Wrench gravity_wrench(const SceneState& state, const SceneConfig& config) {
  return wrench_about(peg_com(state, config),
                      Vec3(0.0, 0.0, -config.peg_weight()), state.hand_pos);
}

namespace {

using Mat3 = Eigen::Matrix3d;
using Mat36 = Eigen::Matrix<double, 3, 6>;

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

// Maps u = (t, theta) to the displacement t + theta x r of the cube centre.
Mat36 point_jacobian(const Vec3& r) {
  Mat36 j;
  j.leftCols<3>() = Mat3::Identity();
  j.rightCols<3>() = -skew(r);
  return j;
}

struct TaxelState {
  TaxelMode mode = TaxelMode::kSeparated;
  Vec3 slide_dir = Vec3::Zero();  // direction of the friction force on the peg
};

// Force on the peg from one cube is f0 - A * J * u.
void taxel_terms(const TaxelSpring& t, const TaxelState& st,
                 const TaxelSpringModel& m, Vec3& f0, Mat3& a) {
  const Vec3 nu = pad_axes(t.pad).normal;
  if (st.mode == TaxelMode::kStick) {
    const Mat3 proj = Mat3::Identity() - nu * nu.transpose();
    f0 = m.k_n * t.preload * nu;
    a = m.k_n * nu * nu.transpose() + m.k_t * proj;
  } else {
    const Vec3 dir = nu + m.friction_mu * st.slide_dir;
    f0 = m.k_n * t.preload * dir;
    a = m.k_n * dir * nu.transpose();
  }
}

Vec3 taxel_force(const TaxelSpring& t, const TaxelState& st,
                 const TaxelSpringModel& m, const Vec6& u) {
  if (st.mode == TaxelMode::kSeparated) return Vec3::Zero();
  Vec3 f0;
  Mat3 a;
  taxel_terms(t, st, m, f0, a);
  return f0 - a * (point_jacobian(t.r) * u);
}

}  // namespace

EquilibriumResult solve_equilibrium(const SceneState& state,
                                    const SceneConfig& config,
                                    const TaxelSpringModel& model,
                                    const Wrench& external,
                                    const SolverOptions& options,
                                    const SensorGeometry& g) {
  model.validate();
  const auto taxels = layout_taxels(state, config, model, g);
  const std::size_t n = taxels.size();
  std::vector<TaxelState> st(n);
  for (std::size_t k = 0; k < n; ++k)
    if (taxels[k].covered && taxels[k].preload > 0.0)
      st[k].mode = TaxelMode::kStick;

  const Wrench weight = gravity_wrench(state, config);
  Vec6 load;
  load.head<3>() = external.force + weight.force;
  load.tail<3>() = external.torque + weight.torque;

  Vec6 u = Vec6::Zero();
  bool settled = false;
  int iter = 0;
  for (; iter < options.max_iterations && !settled; ++iter) {
    for (Pad pad : {Pad::kLeft, Pad::kRight}) {
      bool any = false;
      for (std::size_t k = 0; k < n; ++k)
        any = any || (taxels[k].pad == pad && st[k].mode != TaxelMode::kSeparated);
      if (!any)
        throw SlipError(std::string("grasp lost: no ") +
                        (pad == Pad::kLeft ? "left" : "right") +
                        " pad cube in contact");
    }

    // Mirror pairs are summed first so a mirrored scene assembles the
    // mirrored system bit for bit.
    Mat6 k_mat = Mat6::Zero();
    Vec6 rhs = load;
    for (std::size_t k = 0; k + 1 < n; k += 2) {
      Mat6 pair_k = Mat6::Zero();
      Vec6 pair_b = Vec6::Zero();
      for (std::size_t q = k; q < k + 2; ++q) {
        if (st[q].mode == TaxelMode::kSeparated) continue;
        Vec3 f0;
        Mat3 a;
        taxel_terms(taxels[q], st[q], model, f0, a);
        const Mat36 j = point_jacobian(taxels[q].r);
        pair_k += j.transpose() * a * j;
        pair_b += j.transpose() * f0;
      }
      k_mat += pair_k;
      rhs += pair_b;
    }

    Eigen::PartialPivLU<Mat6> lu(k_mat);
    if (!(lu.rcond() > options.min_rcond))
      throw SlipError("grasp has no stiffness against some peg motion");
    u = lu.solve(rhs);
    if (u.head<3>().norm() > options.max_translation ||
        u.tail<3>().norm() > options.max_rotation) {
      std::ostringstream msg;
      msg << "peg slipped in the grasp (translation " << u.head<3>().norm()
          << " mm, rotation " << u.tail<3>().norm() << " rad)";
      throw SlipError(msg.str());
    }

    settled = true;
    for (std::size_t k = 0; k < n; ++k) {
      const TaxelSpring& t = taxels[k];
      if (!t.covered) continue;
      const Vec3 nu = pad_axes(t.pad).normal;
      const Vec3 delta = point_jacobian(t.r) * u;
      const double compression = t.preload - nu.dot(delta);
      if (compression <= 0.0) {
        if (st[k].mode != TaxelMode::kSeparated) {
          st[k].mode = TaxelMode::kSeparated;
          settled = false;
        }
        continue;
      }
      const double normal = model.k_n * compression;
      const Vec3 trial = -model.k_t * (delta - nu.dot(delta) * nu);
      const double limit = model.friction_mu * normal;
      if (trial.norm() <= limit) {
        if (st[k].mode != TaxelMode::kStick) {
          st[k].mode = TaxelMode::kStick;
          settled = false;
        }
        continue;
      }
      const Vec3 dir = trial / trial.norm();
      if (st[k].mode != TaxelMode::kSlide) {
        st[k].mode = TaxelMode::kSlide;
        st[k].slide_dir = dir;
        settled = false;
      } else if ((dir - st[k].slide_dir).norm() > 1e-10) {
        st[k].slide_dir = dir;
        settled = false;
      }
    }
  }
  if (!settled)
    throw SlipError("friction active set did not settle; treating as slip");

  EquilibriumResult res;
  res.displacement = u;
  res.iterations = iter;
  res.modes.reserve(n);
  std::vector<ContactPoint> left_pts;
  std::vector<ContactPoint> right_pts;
  Vec3 net_f = load.head<3>();
  Vec3 net_t = load.tail<3>();
  for (std::size_t k = 0; k < n; ++k) {
    const TaxelSpring& t = taxels[k];
    res.modes.push_back(st[k].mode);
    const Vec3 f = taxel_force(t, st[k], model, u);
    net_f += f;
    net_t += t.r.cross(f);
    if (!t.covered) continue;
    const PadAxes ax = pad_axes(t.pad);
    // A cube spans a 2x2 block of raw taxels; its load is shared equally.
    const Vec3 reading(-f.dot(ax.x), -f.dot(ax.y), f.dot(ax.normal));
    auto& pts = t.pad == Pad::kLeft ? left_pts : right_pts;
    for (int di = 0; di < 2; ++di)
      for (int dj = 0; dj < 2; ++dj)
        pts.push_back({taxel_center(2 * t.row + di, 2 * t.col + dj, g, Resolution::kRaw),
                       0.25 * reading});
  }
  res.residual_force = net_f;
  res.residual_torque = net_t;
  res.left_raw = bin_contacts(left_pts, g, Resolution::kRaw);
  res.right_raw = bin_contacts(right_pts, g, Resolution::kRaw);
  res.left = sum_pool_2x2(res.left_raw, g);
  res.right = sum_pool_2x2(res.right_raw, g);
  return res;
}

TaxelFrame mirror_frame(const TaxelFrame& f) {
  TaxelFrame out(f.rows(), f.cols());
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) {
      const int mj = f.cols() - 1 - j;
      out(i, mj, 0) = -f(i, j, 0);
      out(i, mj, 1) = f(i, j, 1);
      out(i, mj, 2) = f(i, j, 2);
    }
  return out;
}

SurfaceProfile mirror_surface(const SurfaceProfile& s) {
  SurfaceProfile out = s;
  const int cols = s.depths.cols();
  for (int i = 0; i < s.depths.rows(); ++i)
    for (int j = 0; j < cols; ++j) out.depths(i, cols - 1 - j) = s.depths(i, j);
  out.bump_mean[1] = (cols - 1) - s.bump_mean[1];
  return out;
}

}  // namespace tacsim
