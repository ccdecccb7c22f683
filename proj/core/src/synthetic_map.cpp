#include "lanecurate/synthetic_map.hpp"

#include <cmath>
#include <json.hpp>
#include <random>

#include "file_util.hpp"
#include "lanecurate/error.hpp"
#include "lanecurate/text_format.hpp"

namespace lanecurate {

namespace {

void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    throw ParameterError(std::string("invalid range for ") + name);
  }
}

// mt19937_64 is fully specified by the standard; the distributions are not,
// so uniform draws are derived from raw bits.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(const Range& r) { return r.lo + (r.hi - r.lo) * unit(); }
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

using Mat3 = std::array<double, 9>;

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[3 * i + j] += a[3 * i + k] * b[3 * k + j];
  return c;
}

// World frame: x right, y forward, z up. Camera frame: x right, y down, z forward.
CameraModel make_camera(const MapParams& p, double height, double pitch, double yaw) {
  const Mat3 axes{1, 0, 0, 0, 0, -1, 0, 1, 0};
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const Mat3 yaw_m{cy, -sy, 0, sy, cy, 0, 0, 0, 1};
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const Mat3 pitch_m{1, 0, 0, 0, cp, -sp, 0, sp, cp};
  CameraModel cam;
  cam.fx = p.focal;
  cam.fy = p.focal;
  cam.cx = 0.5 * p.image_width;
  cam.cy = 0.5 * p.image_height;
  cam.width = p.image_width;
  cam.height = p.image_height;
  cam.rotation = multiply(pitch_m, multiply(axes, yaw_m));
  // t = -R * C with the camera center C = (0, 0, height).
  cam.translation = {-cam.rotation[2] * height, -cam.rotation[5] * height,
                     -cam.rotation[8] * height};
  cam.near = p.near;
  return cam;
}

// Point at arc length s along a centerline that starts at the origin heading
// +y, offset laterally by d (positive to the right).
Vec3 arc_point(double curvature, double s, double d) {
  const double heading = curvature * s;
  double x;
  double y;
  if (std::abs(curvature) < 1e-12) {
    x = 0.0;
    y = s;
  } else {
    x = (1.0 - std::cos(heading)) / curvature;
    y = std::sin(heading) / curvature;
  }
  return {x + d * std::cos(heading), y - d * std::sin(heading), 0.0};
}

}  // namespace

void MapParams::validate() const {
  if (lane_count.lo < 1 || lane_count.lo > lane_count.hi) {
    throw ParameterError("invalid range for lane_count");
  }
  check_range(lane_width, "lane_width");
  check_range(curvature, "curvature");
  check_range(camera_height, "camera_height");
  check_range(camera_pitch, "camera_pitch");
  check_range(camera_yaw, "camera_yaw");
  check_range(lateral_jitter, "lateral_jitter");
  check_range(road_length, "road_length");
  if (!(lane_width.lo > 0.0)) throw ParameterError("lane_width must be positive");
  if (!(camera_height.lo > 0.0)) throw ParameterError("camera_height must be positive");
  if (!(road_length.lo > start_offset + sample_spacing)) {
    throw ParameterError("road_length must exceed start_offset by one sample");
  }
  if (!(sample_spacing > 0.0)) throw ParameterError("sample_spacing must be positive");
  if (!(focal > 0.0) || image_width <= 0 || image_height <= 0 || !(near > 0.0)) {
    throw ParameterError("invalid camera intrinsics");
  }
}

std::vector<Scene> generate_synthetic_map(std::uint64_t seed, std::size_t n_scenes,
                                          const MapParams& params) {
  if (n_scenes < 1) throw ParameterError("n_scenes must be >= 1");
  params.validate();
  Sampler rng(seed);
  std::vector<Scene> scenes;
  scenes.reserve(n_scenes);
  for (std::size_t si = 0; si < n_scenes; ++si) {
    const int n_lines = rng.integer(params.lane_count.lo, params.lane_count.hi);
    const int ego_line = rng.integer(0, n_lines);
    const double width = rng.uniform(params.lane_width);
    const double curvature = rng.uniform(params.curvature);
    const double jitter = rng.uniform(params.lateral_jitter);
    const double length = rng.uniform(params.road_length);
    const double height = rng.uniform(params.camera_height);
    const double pitch = rng.uniform(params.camera_pitch);
    const double yaw = rng.uniform(params.camera_yaw);

    Scene scene;
    char id[32];
    std::snprintf(id, sizeof(id), "scene_%05zu", si);
    scene.scene_id = id;
    scene.camera = make_camera(params, height, pitch, yaw);
    const auto n_samples =
        static_cast<std::size_t>(std::floor((length - params.start_offset) / params.sample_spacing)) + 1;
    for (int li = 0; li < n_lines; ++li) {
      const double offset = (li - ego_line + 0.5) * width + jitter;
      LanePolyline3D lane;
      lane.lane_id = li;
      lane.points.reserve(n_samples);
      for (std::size_t k = 0; k < n_samples; ++k) {
        const double s = params.start_offset + params.sample_spacing * static_cast<double>(k);
        lane.points.push_back(arc_point(curvature, s, offset));
      }
      scene.lanes.push_back(std::move(lane));
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::string map_to_json(const std::vector<Scene>& scenes) {
  std::string out = "{\"scenes\":[";
  auto num = [&out](double v) { out += format_g17(v); };
  auto list = [&](const auto& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ',';
      num(values[i]);
    }
    out += ']';
  };
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    const Scene& sc = scenes[s];
    out += s ? ",\n" : "\n";
    out += "{\"scene_id\":" + nlohmann::json(sc.scene_id).dump() + ",\"lanes\":[";
    for (std::size_t l = 0; l < sc.lanes.size(); ++l) {
      if (l) out += ',';
      out += '[';
      const auto& pts = sc.lanes[l].points;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        if (p) out += ',';
        list(std::array<double, 3>{pts[p].x, pts[p].y, pts[p].z});
      }
      out += ']';
    }
    const CameraModel& c = sc.camera;
    out += "],\"camera\":{\"fx\":";
    num(c.fx);
    out += ",\"fy\":";
    num(c.fy);
    out += ",\"cx\":";
    num(c.cx);
    out += ",\"cy\":";
    num(c.cy);
    out += ",\"width\":" + std::to_string(c.width) + ",\"height\":" + std::to_string(c.height);
    out += ",\"rotation\":";
    list(c.rotation);
    out += ",\"translation\":";
    list(c.translation);
    out += ",\"near\":";
    num(c.near);
    out += "}}";
  }
  out += "\n]}\n";
  return out;
}

std::vector<Scene> map_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("map file: ") + e.what());
  }
  std::vector<Scene> scenes;
  try {
    for (const auto& js : doc.at("scenes")) {
      Scene sc;
      sc.scene_id = js.at("scene_id").get<std::string>();
      int lane_id = 0;
      for (const auto& jl : js.at("lanes")) {
        LanePolyline3D lane;
        lane.lane_id = lane_id++;
        for (const auto& jp : jl) {
          if (jp.size() != 3) throw ParseError("scene " + sc.scene_id + ": point needs 3 coordinates");
          lane.points.push_back({jp[0].get<double>(), jp[1].get<double>(), jp[2].get<double>()});
        }
        lane.validate();
        sc.lanes.push_back(std::move(lane));
      }
      const auto& jc = js.at("camera");
      CameraModel& c = sc.camera;
      c.fx = jc.at("fx").get<double>();
      c.fy = jc.at("fy").get<double>();
      c.cx = jc.at("cx").get<double>();
      c.cy = jc.at("cy").get<double>();
      c.width = jc.at("width").get<int>();
      c.height = jc.at("height").get<int>();
      const auto rot = jc.at("rotation").get<std::vector<double>>();
      const auto tr = jc.at("translation").get<std::vector<double>>();
      if (rot.size() != 9 || tr.size() != 3) {
        throw ParseError("scene " + sc.scene_id + ": rotation needs 9 and translation 3 values");
      }
      std::copy(rot.begin(), rot.end(), c.rotation.begin());
      std::copy(tr.begin(), tr.end(), c.translation.begin());
      c.near = jc.at("near").get<double>();
      try {
        c.validate();
      } catch (const ParameterError& e) {
        throw ParseError("scene " + sc.scene_id + ": " + e.what());
      }
      scenes.push_back(std::move(sc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("map file: ") + e.what());
  }
  return scenes;
}

void write_map_file(const std::filesystem::path& path, const std::vector<Scene>& scenes) {
  detail::write_file(path, map_to_json(scenes));
}

std::vector<Scene> read_map_file(const std::filesystem::path& path) {
  try {
    return map_from_json(detail::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace lanecurate
