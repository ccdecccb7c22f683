#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lanecurate/geometry.hpp"

namespace lanecurate {

/// Closed interval [lo, hi]; lo == hi pins the value.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct CountRange {
  int lo = 1;
  int hi = 1;
};

/// Road-geometry ranges the synthetic map generator draws from. Angles are
/// radians, curvature is 1/m (positive bends right), lengths are meters.
struct MapParams {
  CountRange lane_count{1, static_cast<int>(kDefaultMaxLanes)};
  Range lane_width{3.0, 3.8};
  Range curvature{-0.012, 0.012};
  Range camera_height{1.3, 1.9};
  Range camera_pitch{0.0, 0.06};
  Range camera_yaw{-0.04, 0.04};
  Range lateral_jitter{-0.6, 0.6};
  Range road_length{40.0, 90.0};
  double start_offset = -3.0;  // first sample, relative to the camera
  double sample_spacing = 1.0;
  double focal = 400.0;
  int image_width = 768;
  int image_height = 256;
  double near = 0.5;

  void validate() const;
};

struct Scene {
  std::string scene_id;
  std::vector<LanePolyline3D> lanes;
  CameraModel camera;
  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Parallel lane lines along a straight or circular-arc centerline, with the
/// camera placed on the ego lane looking forward. Pure function of its inputs.
std::vector<Scene> generate_synthetic_map(std::uint64_t seed, std::size_t n_scenes,
                                          const MapParams& params = {});

std::string map_to_json(const std::vector<Scene>& scenes);
std::vector<Scene> map_from_json(const std::string& text);

void write_map_file(const std::filesystem::path& path, const std::vector<Scene>& scenes);
std::vector<Scene> read_map_file(const std::filesystem::path& path);

}  // namespace lanecurate
