#pragma once

#include <string>

#include "tacsim/frame_io.hpp"

namespace tacsim {

struct RenderOptions {
  double normal_scale = 5.0;  // N that saturates a cell
  double shear_scale = 5.0;   // N drawn as a half-cell arrow
  int cell = 40;              // px
};

// 0..255 red level for a normal reading: linear up to normal_scale, clamped;
// tensile (negative) readings render as background.
int cell_intensity(double normal, const RenderOptions& o = {});

// Plain SVG text, row 0 at the bottom as seen from the peg side. Cells carry
// fill rgb(255, 255-v, 255-v); one <line> arrow per taxel with nonzero shear.
std::string render_svg(const FrameRecord& rec, const RenderOptions& o = {});

}  // namespace tacsim
