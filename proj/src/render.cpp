#include "tacsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tacsim {

int cell_intensity(double normal, const RenderOptions& o) {
  if (!(normal > 0.0)) return 0;
  const double v = std::min(1.0, normal / o.normal_scale);
  return static_cast<int>(std::lround(255.0 * v));
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const FrameRecord& rec, const RenderOptions& o) {
  const TaxelFrame& f = rec.frame;
  const int rows = f.rows();
  const int cols = f.cols();
  const int w = cols * o.cell;
  const int h = rows * o.cell;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  s << "<title>" << rec.pad_id << ' ' << to_string(rec.resolution) << "</title>\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
    << "\" fill=\"rgb(255,255,255)\"/>\n";

  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int v = cell_intensity(f(i, j, 2), o);
      if (v == 0) continue;
      const int x = j * o.cell;
      const int y = (rows - 1 - i) * o.cell;
      s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << o.cell
        << "\" height=\"" << o.cell << "\" fill=\"rgb(255," << 255 - v << ','
        << 255 - v << ")\"/>\n";
    }
  }
  const double half = 0.5 * o.cell;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double sx = f(i, j, 0);
      const double sy = f(i, j, 1);
      if (sx == 0.0 && sy == 0.0) continue;
      const double k = half / o.shear_scale;
      const double len = std::hypot(sx, sy) * k;
      const double clip = len > half ? half / len : 1.0;
      const double cx = j * o.cell + half;
      const double cy = (rows - 1 - i) * o.cell + half;
      // SVG y grows downward.
      s << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(cy) << "\" x2=\""
        << fmt(cx + sx * k * clip) << "\" y2=\"" << fmt(cy - sy * k * clip)
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace tacsim
