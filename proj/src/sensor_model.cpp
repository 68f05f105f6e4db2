#include "tacsim/sensor_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tacsim/errors.hpp"

namespace tacsim {

std::string to_string(Resolution r) {
  return r == Resolution::kRaw ? "raw" : "pooled";
}

Resolution resolution_from_string(const std::string& s) {
  if (s == "raw") return Resolution::kRaw;
  if (s == "pooled") return Resolution::kPooled;
  throw DataError("unknown resolution '" + s + "'");
}

void SensorGeometry::validate() const {
  if (pooled_rows <= 0 || pooled_cols <= 0)
    throw ConfigError("sensor grid must be non-empty");
  if (pooled_rows * 2 != raw_rows || pooled_cols * 2 != raw_cols)
    throw ConfigError("raw grid must be exactly twice the pooled grid");
  if (!(pooled_pitch > 0.0) || !(nominal_depth > 0.0))
    throw ConfigError("pitch and nominal depth must be positive");
  if (!(cube_size > 0.0) || cube_size > pooled_pitch)
    throw ConfigError("cube footprint must fit inside one taxel pitch");
}

Vec2 SensorGeometry::tiling_extent() const {
  return {pooled_cols * pooled_pitch, pooled_rows * pooled_pitch};
}

Vec2 SensorGeometry::margin() const {
  const Vec2 slack = Vec2(pad_extent_cols, pad_extent_rows) - tiling_extent();
  return slack.cwiseMax(0.0) / 2.0;
}

Vec2 SensorGeometry::bounds() const { return margin() + tiling_extent(); }

TaxelFrame::TaxelFrame(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      data_(static_cast<std::size_t>(rows * cols * 3), 0.0) {
  if (rows < 0 || cols < 0) throw ShapeError("negative frame shape");
}

TaxelFrame TaxelFrame::raw(const SensorGeometry& g) {
  return TaxelFrame(g.raw_rows, g.raw_cols);
}

TaxelFrame TaxelFrame::pooled(const SensorGeometry& g) {
  return TaxelFrame(g.pooled_rows, g.pooled_cols);
}

double& TaxelFrame::at(int i, int j, int axis) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_ || axis < 0 || axis > 2)
    throw IndexError("taxel index out of range");
  return (*this)(i, j, axis);
}

double TaxelFrame::at(int i, int j, int axis) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_ || axis < 0 || axis > 2)
    throw IndexError("taxel index out of range");
  return (*this)(i, j, axis);
}

bool TaxelFrame::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::array<double, 3> TaxelFrame::totals() const {
  std::array<double, 3> sum{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < data_.size(); k += 3)
    for (int a = 0; a < 3; ++a) sum[a] += data_[k + a];
  return sum;
}

void require_resolution(const TaxelFrame& f, const SensorGeometry& g,
                        Resolution r, const char* what) {
  if (!f.is_shape(g.rows(r), g.cols(r))) {
    std::ostringstream msg;
    msg << what << ": expected " << to_string(r) << " frame " << g.rows(r)
        << "x" << g.cols(r) << ", got " << f.rows() << "x" << f.cols();
    throw ShapeError(msg.str());
  }
}

Vec2 taxel_center(int i, int j, const SensorGeometry& g, Resolution r) {
  if (i < 0 || i >= g.rows(r) || j < 0 || j >= g.cols(r)) {
    std::ostringstream msg;
    msg << "taxel (" << i << "," << j << ") outside " << to_string(r)
        << " grid " << g.rows(r) << "x" << g.cols(r);
    throw IndexError(msg.str());
  }
  const double p = g.pitch(r);
  return g.margin() + Vec2((j + 0.5) * p, (i + 0.5) * p);
}

namespace {

// Smallest k with pos <= origin + (k + 1) * pitch.
int edge_bin(double pos, double origin, double pitch, int count) {
  for (int k = 0; k < count - 1; ++k)
    if (pos <= origin + (k + 1) * pitch) return k;
  return count - 1;
}

}  // namespace

std::array<int, 2> taxel_index(const Vec2& pos, const SensorGeometry& g,
                               Resolution r) {
  const Vec2 lo = g.margin();
  const Vec2 hi = g.bounds();
  // Written so that NaN coordinates are rejected too.
  if (!(pos.x() >= lo.x() && pos.x() <= hi.x() && pos.y() >= lo.y() &&
        pos.y() <= hi.y())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "contact at (" << pos.x() << ", " << pos.y()
        << ") mm lies outside the pad bounds [" << lo.x() << ", " << hi.x()
        << "] x [" << lo.y() << ", " << hi.y() << "]";
    throw RejectedContactError(msg.str());
  }
  const double p = g.pitch(r);
  return {edge_bin(pos.y(), lo.y(), p, g.rows(r)),
          edge_bin(pos.x(), lo.x(), p, g.cols(r))};
}

TaxelFrame bin_contacts(std::span<const ContactPoint> contacts,
                        const SensorGeometry& g, Resolution r) {
  TaxelFrame frame(g.rows(r), g.cols(r));
  for (const ContactPoint& c : contacts) {
    const auto [i, j] = taxel_index(c.position, g, r);
    for (int a = 0; a < 3; ++a) frame(i, j, a) += c.force[a];
  }
  return frame;
}

TaxelFrame sum_pool_2x2(const TaxelFrame& raw, const SensorGeometry& g) {
  require_resolution(raw, g, Resolution::kRaw, "sum_pool_2x2");
  TaxelFrame pooled = TaxelFrame::pooled(g);
  for (int i = 0; i < pooled.rows(); ++i)
    for (int j = 0; j < pooled.cols(); ++j)
      for (int a = 0; a < 3; ++a)
        pooled(i, j, a) = raw(2 * i, 2 * j, a) + raw(2 * i, 2 * j + 1, a) +
                          raw(2 * i + 1, 2 * j, a) +
                          raw(2 * i + 1, 2 * j + 1, a);
  return pooled;
}

}  // namespace tacsim
