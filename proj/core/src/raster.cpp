#include "lanecurate/raster.hpp"

#include <cmath>
#include <cstdlib>

#include "lanecurate/error.hpp"

namespace lanecurate {

namespace {

void stamp(GrayImage& img, long x, long y, int line_width) {
  const long lo = -(line_width - 1) / 2;
  const long hi = line_width / 2;
  for (long dy = lo; dy <= hi; ++dy) {
    for (long dx = lo; dx <= hi; ++dx) {
      const long px = x + dx;
      const long py = y + dy;
      if (px >= 0 && py >= 0 && px < img.width && py < img.height) {
        img.at(static_cast<int>(px), static_cast<int>(py)) = 1.0;
      }
    }
  }
}

void draw_segment(GrayImage& img, long x0, long y0, long x1, long y1, int line_width) {
  const long dx = std::labs(x1 - x0);
  const long dy = -std::labs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1;
  const long sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  while (true) {
    stamp(img, x0, y0, line_width);
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

// Keeps Bresenham bounded for wildly extrapolated coordinates.
long to_pixel(double v) {
  constexpr double kLimit = 1e6;
  return std::lround(std::fmax(-kLimit, std::fmin(kLimit, v)));
}

}  // namespace

GrayImage rasterize_mask(const LaneMask& mask, const RowGrid& grid, int width, int height,
                         int line_width) {
  if (width < 1 || height < 1) throw ParameterError("raster size must be positive");
  if (line_width < 1) throw ParameterError("line width must be >= 1");
  GrayImage img(width, height, 0.0);
  for (const auto& lane : mask.lanes) {
    if (lane.size() != grid.samples) throw ParameterError("lane does not match the row grid");
    bool have_prev = false;
    long px = 0;
    long py = 0;
    for (std::size_t k = 0; k < lane.size(); ++k) {
      if (!lane.valid[k]) continue;
      const long x = to_pixel(lane.xs[k]);
      const long y = to_pixel(grid.row(k));
      if (have_prev) {
        draw_segment(img, px, py, x, y, line_width);
      } else {
        stamp(img, x, y, line_width);
      }
      px = x;
      py = y;
      have_prev = true;
    }
  }
  return img;
}

}  // namespace lanecurate
