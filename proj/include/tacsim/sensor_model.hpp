#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tacsim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

enum class Resolution { kRaw, kPooled };

std::string to_string(Resolution r);
Resolution resolution_from_string(const std::string& s);

// Taxel-grid geometry of one sensor pad.
//
// Pad frame: origin at the corner of taxel (0,0), x along columns, y along
// rows, z the outward surface normal. Row index grows along +y.
//
// The nominal pad extent (26.1 x 22.6 mm) is smaller than the pooled tiling
// (6 x 4.7 = 28.2 mm by 5 x 4.7 = 23.5 mm). A positive margin would be split
// equally between both edges; a negative one is clamped to zero so the tiling
// itself defines the binning bounds.
struct SensorGeometry {
  int raw_rows = 12;
  int raw_cols = 10;
  int pooled_rows = 6;
  int pooled_cols = 5;
  double pooled_pitch = 4.7;         // mm
  double pad_extent_rows = 26.1;     // mm, along y
  double pad_extent_cols = 22.6;     // mm, along x
  double cube_size = 4.6;            // mm, cube footprint edge
  double nominal_depth = 1.0;        // mm

  // Throws ConfigError when the invariants do not hold.
  void validate() const;

  double raw_pitch() const { return pooled_pitch / 2.0; }
  double pitch(Resolution r) const {
    return r == Resolution::kRaw ? raw_pitch() : pooled_pitch;
  }
  int rows(Resolution r) const {
    return r == Resolution::kRaw ? raw_rows : pooled_rows;
  }
  int cols(Resolution r) const {
    return r == Resolution::kRaw ? raw_cols : pooled_cols;
  }

  // Per-edge offset of the tiling from the pad corner, (x, y).
  Vec2 margin() const;
  // Extent covered by the tiling, (x, y).
  Vec2 tiling_extent() const;
  // Upper corner of the region accepted by bin_contacts, (x, y).
  Vec2 bounds() const;
};

// One reading of one pad: rows x cols taxels, three force components each
// (x shear, y shear, z normal) in newtons. Stored row-major.
class TaxelFrame {
 public:
  TaxelFrame() = default;
  TaxelFrame(int rows, int cols);

  static TaxelFrame raw(const SensorGeometry& g = {});
  static TaxelFrame pooled(const SensorGeometry& g = {});

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& at(int i, int j, int axis);
  double at(int i, int j, int axis) const;

  // Unchecked access for inner loops.
  double& operator()(int i, int j, int axis) {
    return data_[static_cast<std::size_t>((i * cols_ + j) * 3 + axis)];
  }
  double operator()(int i, int j, int axis) const {
    return data_[static_cast<std::size_t>((i * cols_ + j) * 3 + axis)];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool is_shape(int rows, int cols) const {
    return rows_ == rows && cols_ == cols;
  }
  bool all_finite() const;

  // Per-axis sum in row-major taxel order.
  std::array<double, 3> totals() const;

  bool operator==(const TaxelFrame&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Throws ShapeError unless `f` is at the requested resolution.
void require_resolution(const TaxelFrame& f, const SensorGeometry& g,
                        Resolution r, const char* what);

struct ContactPoint {
  Vec2 position = Vec2::Zero();  // pad coordinates, mm
  Vec3 force = Vec3::Zero();     // pad frame, N
};

Vec2 taxel_center(int i, int j, const SensorGeometry& g, Resolution r);

// Index of the taxel footprint containing `pos`. Positions on a shared edge
// go to the lower index. Throws RejectedContactError when out of bounds.
std::array<int, 2> taxel_index(const Vec2& pos, const SensorGeometry& g,
                               Resolution r);

// Sums contact forces into the taxel footprints. Contacts are accumulated in
// input order.
TaxelFrame bin_contacts(std::span<const ContactPoint> contacts,
                        const SensorGeometry& g,
                        Resolution r = Resolution::kRaw);

TaxelFrame sum_pool_2x2(const TaxelFrame& raw, const SensorGeometry& g = {});

}  // namespace tacsim
