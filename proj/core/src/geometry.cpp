#include "lanecurate/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lanecurate/error.hpp"

namespace lanecurate {

void LanePolyline3D::validate() const {
  if (points.size() < 2) {
    throw ParameterError("lane " + std::to_string(lane_id) + " has fewer than 2 points");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dx = points[i].x - points[i - 1].x;
    const double dy = points[i].y - points[i - 1].y;
    const double dz = points[i].z - points[i - 1].z;
    if (!(std::sqrt(dx * dx + dy * dy + dz * dz) > 1e-9)) {
      throw ParameterError("lane " + std::to_string(lane_id) + " repeats point " +
                           std::to_string(i));
    }
  }
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw ParameterError("camera focal lengths must be positive");
  if (width <= 0 || height <= 0) throw ParameterError("camera image size must be positive");
  if (!(near > 0.0)) throw ParameterError("camera near plane must be positive");
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw ParameterError("camera principal point must be finite");
  }
  const auto& r = rotation;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += r[3 * i + k] * r[3 * j + k];
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-9) {
        throw ParameterError("camera rotation is not orthonormal");
      }
    }
  }
  const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                     r[2] * (r[3] * r[7] - r[4] * r[6]);
  if (std::abs(det - 1.0) > 1e-9) throw ParameterError("camera rotation has determinant != +1");
  for (double t : translation) {
    if (!std::isfinite(t)) throw ParameterError("camera translation must be finite");
  }
}

Vec3 CameraModel::to_camera(const Vec3& p) const {
  const auto& r = rotation;
  return {r[0] * p.x + r[1] * p.y + r[2] * p.z + translation[0],
          r[3] * p.x + r[4] * p.y + r[5] * p.z + translation[1],
          r[6] * p.x + r[7] * p.y + r[8] * p.z + translation[2]};
}

void RowGrid::validate() const {
  if (!(y_top >= 0.0) || !(y_top < y_bottom) || !std::isfinite(y_bottom)) {
    throw ParameterError("row grid needs 0 <= y_top < y_bottom");
  }
  if (samples < 2) throw ParameterError("row grid needs at least 2 samples");
}

double RowGrid::row(std::size_t k) const {
  if (k + 1 == samples) return y_bottom;
  return y_top + (y_bottom - y_top) * static_cast<double>(k) / static_cast<double>(samples - 1);
}

std::vector<double> RowGrid::rows() const {
  std::vector<double> out(samples);
  for (std::size_t k = 0; k < samples; ++k) out[k] = row(k);
  return out;
}

std::size_t SampledLane::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

namespace {

template <typename F>
double mean_over_rows(const SampledLane& lane, F&& f) {
  const bool any_valid = lane.valid_count() > 0;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < lane.xs.size(); ++i) {
    if (any_valid && !lane.valid[i]) continue;
    sum += f(lane.xs[i]);
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

double SampledLane::mean_x() const {
  return mean_over_rows(*this, [](double x) { return x; });
}

double SampledLane::mean_abs_offset(double cx) const {
  return mean_over_rows(*this, [cx](double x) { return std::abs(x - cx); });
}

std::vector<Pixel> project_polyline(const LanePolyline3D& poly, const CameraModel& cam) {
  std::vector<Pixel> out;
  out.reserve(poly.points.size() + 2);
  auto project = [&cam](const Vec3& c) {
    return Pixel{cam.fx * c.x / c.z + cam.cx, cam.fy * c.y / c.z + cam.cy};
  };

  Vec3 prev{};
  bool prev_in_front = false;
  for (std::size_t i = 0; i < poly.points.size(); ++i) {
    const Vec3 cur = cam.to_camera(poly.points[i]);
    const bool in_front = cur.z > cam.near;
    if (i > 0 && in_front != prev_in_front) {
      const double t = (cam.near - prev.z) / (cur.z - prev.z);
      const Vec3 hit{prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y), cam.near};
      out.push_back(project(hit));
    }
    if (in_front) out.push_back(project(cur));
    prev = cur;
    prev_in_front = in_front;
  }
  // A single crossing point with nothing in front is not a visible curve.
  if (out.size() == 1) out.clear();
  return out;
}

SampledLane resample_lane(std::vector<Pixel> curve, const RowGrid& grid) {
  grid.validate();
  std::stable_sort(curve.begin(), curve.end(),
                   [](const Pixel& a, const Pixel& b) { return a.v < b.v; });

  // Collapse exact duplicate rows to their mean u.
  std::vector<Pixel> pts;
  pts.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size();) {
    std::size_t j = i;
    double sum_u = 0.0;
    while (j < curve.size() && curve[j].v == curve[i].v) sum_u += curve[j++].u;
    pts.push_back({sum_u / static_cast<double>(j - i), curve[i].v});
    i = j;
  }
  if (pts.size() < 2) {
    throw DegenerateCurveError("curve has fewer than 2 distinct rows");
  }
  for (const auto& p : pts) {
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) {
      throw DegenerateCurveError("curve has non-finite coordinates");
    }
  }

  auto lerp = [](const Pixel& a, const Pixel& b, double v) {
    return a.u + (b.u - a.u) * (v - a.v) / (b.v - a.v);
  };

  SampledLane lane;
  lane.xs.resize(grid.samples);
  lane.valid.resize(grid.samples);
  const double v_min = pts.front().v;
  const double v_max = pts.back().v;
  for (std::size_t k = 0; k < grid.samples; ++k) {
    const double y = grid.row(k);
    if (y < v_min) {
      lane.xs[k] = lerp(pts[0], pts[1], y);
      lane.valid[k] = false;
    } else if (y > v_max) {
      lane.xs[k] = lerp(pts[pts.size() - 2], pts.back(), y);
      lane.valid[k] = false;
    } else {
      // First point with v >= y; the segment ends there.
      auto it = std::lower_bound(pts.begin(), pts.end(), y,
                                 [](const Pixel& p, double v) { return p.v < v; });
      if (it->v == y) {
        lane.xs[k] = it->u;
      } else {
        lane.xs[k] = lerp(*(it - 1), *it, y);
      }
      lane.valid[k] = true;
    }
  }
  return lane;
}

namespace {

// Liang-Barsky parametric clip of segment a->b against the rectangle.
bool clip_segment(Pixel a, Pixel b, double xmax, double ymax, Pixel& out_a, Pixel& out_b) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double du = b.u - a.u;
  const double dv = b.v - a.v;
  const double p[4] = {-du, du, -dv, dv};
  const double q[4] = {a.u, xmax - a.u, a.v, ymax - a.v};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  out_a = t0 == 0.0 ? a : Pixel{a.u + t0 * du, a.v + t0 * dv};
  out_b = t1 == 1.0 ? b : Pixel{a.u + t1 * du, a.v + t1 * dv};
  return true;
}

bool near_same(const Pixel& a, const Pixel& b) {
  return std::abs(a.u - b.u) <= 1e-9 && std::abs(a.v - b.v) <= 1e-9;
}

}  // namespace

std::vector<Pixel> clip_to_image(const std::vector<Pixel>& curve, int width, int height) {
  const double xmax = static_cast<double>(width - 1);
  const double ymax = static_cast<double>(height - 1);
  std::vector<std::vector<Pixel>> pieces;
  std::vector<Pixel> current;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    Pixel a;
    Pixel b;
    if (!clip_segment(curve[i - 1], curve[i], xmax, ymax, a, b)) {
      if (!current.empty()) pieces.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (current.empty()) {
      current.push_back(a);
    } else if (!near_same(current.back(), a)) {
      // The previous segment left the image and this one re-entered.
      pieces.push_back(std::move(current));
      current.clear();
      current.push_back(a);
    }
    if (!near_same(current.back(), b)) current.push_back(b);
    if (!(b == curve[i])) {
      pieces.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) pieces.push_back(std::move(current));

  std::vector<Pixel> best;
  double best_extent = -1.0;
  for (auto& piece : pieces) {
    if (piece.size() < 2) continue;
    auto [lo, hi] = std::minmax_element(piece.begin(), piece.end(),
                                        [](const Pixel& x, const Pixel& y) { return x.v < y.v; });
    const double extent = hi->v - lo->v;
    if (extent > best_extent) {
      best_extent = extent;
      best = std::move(piece);
    }
  }
  return best;
}

LaneMask extract_lane_mask(const std::vector<LanePolyline3D>& scene, const CameraModel& cam,
                           const RowGrid& grid, std::size_t max_lanes, std::string scene_id) {
  cam.validate();
  grid.validate();
  if (grid.y_bottom >= static_cast<double>(cam.height)) {
    throw ParameterError("row grid extends below the image");
  }

  struct Candidate {
    SampledLane lane;
    double offset;
    double mean_x;
    std::size_t order;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const auto projected = project_polyline(scene[i], cam);
    if (projected.empty()) continue;
    const auto clipped = clip_to_image(projected, cam.width, cam.height);
    if (clipped.size() < 2) continue;
    SampledLane lane;
    try {
      lane = resample_lane(clipped, grid);
    } catch (const DegenerateCurveError&) {
      continue;
    }
    if (lane.valid_count() < 2) continue;
    const double offset = lane.mean_abs_offset(cam.cx);
    const double mx = lane.mean_x();
    candidates.push_back({std::move(lane), offset, mx, i});
  }

  if (candidates.size() > max_lanes) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.offset < b.offset; });
    candidates.resize(max_lanes);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.mean_x != b.mean_x) return a.mean_x < b.mean_x;
    return a.order < b.order;
  });

  LaneMask mask;
  mask.scene_id = std::move(scene_id);
  mask.lanes.reserve(candidates.size());
  for (auto& c : candidates) mask.lanes.push_back(std::move(c.lane));
  return mask;
}

}  // namespace lanecurate
