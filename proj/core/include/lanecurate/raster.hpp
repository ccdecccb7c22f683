#pragma once

#include "lanecurate/geometry.hpp"
#include "lanecurate/image.hpp"

namespace lanecurate {

/// Binary lane raster: each lane's valid-row points joined by Bresenham
/// segments stamped with a line_width x line_width square brush. Strokes are
/// 1.0, background 0.0, anything off-canvas is dropped.
GrayImage rasterize_mask(const LaneMask& mask, const RowGrid& grid, int width, int height,
                         int line_width = 1);

}  // namespace lanecurate
