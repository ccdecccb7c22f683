#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace lanecurate {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// A point on the image plane, in pixels.
struct Pixel {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// One lane marking from the map, as an ordered polyline in world meters.
struct LanePolyline3D {
  int lane_id = 0;
  std::vector<Vec3> points;

  /// Throws ParameterError unless there are >= 2 points and consecutive
  /// points are more than 1e-9 m apart.
  void validate() const;
  friend bool operator==(const LanePolyline3D&, const LanePolyline3D&) = default;
};

/// Pinhole camera. The pose maps world to camera: p_cam = R * p_world + t,
/// with the camera frame x right, y down, z forward.
struct CameraModel {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major
  std::array<double, 3> translation{0, 0, 0};
  double near = 0.5;

  void validate() const;
  Vec3 to_camera(const Vec3& world) const;
  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

/// P image rows spaced uniformly from y_top to y_bottom, both inclusive.
struct RowGrid {
  double y_top = 128.0;
  double y_bottom = 255.0;
  std::size_t samples = 50;

  void validate() const;
  /// Row k, k = 0 is the top row.
  double row(std::size_t k) const;
  std::vector<double> rows() const;
  friend bool operator==(const RowGrid&, const RowGrid&) = default;
};

/// A lane as x-coordinates at the rows of a RowGrid. Rows outside the
/// lane's vertical extent hold linearly extrapolated values with valid=false.
struct SampledLane {
  std::vector<double> xs;
  std::vector<bool> valid;

  std::size_t size() const { return xs.size(); }
  std::size_t valid_count() const;
  /// Mean x over valid rows, or over all rows if none are valid.
  double mean_x() const;
  /// Mean |x - cx| over valid rows, or over all rows if none are valid.
  double mean_abs_offset(double cx) const;
  friend bool operator==(const SampledLane&, const SampledLane&) = default;
};

struct LaneMask {
  std::string scene_id;
  std::vector<SampledLane> lanes;

  std::size_t size() const { return lanes.size(); }
  bool empty() const { return lanes.empty(); }
  friend bool operator==(const LaneMask&, const LaneMask&) = default;
};

inline constexpr std::size_t kDefaultMaxLanes = 4;

/// Projects a polyline into the camera. Points at depth <= near are dropped
/// and segments crossing the near plane are cut at depth == near. The
/// result may leave the image rectangle; an empty result means nothing was
/// in front of the camera.
std::vector<Pixel> project_polyline(const LanePolyline3D& poly, const CameraModel& cam);

/// Resamples a 2D curve onto the grid rows. Throws DegenerateCurveError for
/// fewer than two distinct v values.
SampledLane resample_lane(std::vector<Pixel> curve, const RowGrid& grid);

/// Clips a polyline to the closed rectangle [0, width-1] x [0, height-1] and
/// returns the clipped piece with the largest vertical extent.
std::vector<Pixel> clip_to_image(const std::vector<Pixel>& curve, int width, int height);

/// Projects, clips and resamples every polyline of a scene. Lanes that vanish,
/// are degenerate, or cover fewer than two grid rows are dropped. At most
/// max_lanes survive, chosen by smallest mean |x - cx|, and are returned
/// ordered left to right by mean x.
LaneMask extract_lane_mask(const std::vector<LanePolyline3D>& scene, const CameraModel& cam,
                           const RowGrid& grid, std::size_t max_lanes = kDefaultMaxLanes,
                           std::string scene_id = {});

}  // namespace lanecurate
