#include "lanecurate/config.hpp"

#include <algorithm>
#include <cmath>

#include "config_json.hpp"
#include "lanecurate/error.hpp"

namespace lanecurate {

void PipelineConfig::validate() const {
  grid.validate();
  if (grid.y_bottom >= frame_height) throw ParameterError("row grid extends below the frame");
  if (max_lanes < 1) throw ParameterError("max_lanes must be >= 1");
  if (rank && *rank < 1) throw ParameterError("rank must be >= 1");
  if (kappa && (!std::isfinite(*kappa) || *kappa < 0.0)) {
    throw ParameterError("kappa must be finite and non-negative");
  }
  if (k_lanes < 2) throw ParameterError("K_lanes must be >= 2");
  if (k_images < 1) throw ParameterError("K_images must be >= 1");
  if (candidates_per_group < 1) throw ParameterError("candidates_per_group must be >= 1");
  if (frame_width < 1 || frame_height < 1) throw ParameterError("frame size must be positive");
  if (line_width < 1) throw ParameterError("line_width must be >= 1");
}

namespace detail {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&item](const char* k) { return item.key() == k; });
    if (!known) throw ParseError(where + ": unknown key '" + item.key() + "'");
  }
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json j;
  j["grid"] = {{"y_top", c.grid.y_top}, {"y_bottom", c.grid.y_bottom}, {"samples", c.grid.samples}};
  j["max_lanes"] = c.max_lanes;
  j["rank"] = c.rank ? nlohmann::json(*c.rank) : nlohmann::json("auto");
  j["kappa"] = c.kappa ? nlohmann::json(*c.kappa) : nlohmann::json("auto");
  j["k_lanes"] = c.k_lanes;
  j["k_images"] = c.k_images;
  j["candidates_per_group"] = c.candidates_per_group;
  j["policy"] = to_string(c.policy);
  j["seed"] = c.seed;
  j["frame"] = {{"width", c.frame_width}, {"height", c.frame_height}};
  j["line_width"] = c.line_width;
  return j;
}

PipelineConfig config_from_json(const nlohmann::json& j, const std::string& where) {
  reject_unknown_keys(j,
                      {"grid", "max_lanes", "rank", "kappa", "k_lanes", "k_images",
                       "candidates_per_group", "policy", "seed", "frame", "line_width"},
                      where);
  PipelineConfig c;
  try {
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      reject_unknown_keys(g, {"y_top", "y_bottom", "samples"}, where + ".grid");
      c.grid.y_top = g.value("y_top", c.grid.y_top);
      c.grid.y_bottom = g.value("y_bottom", c.grid.y_bottom);
      c.grid.samples = g.value("samples", c.grid.samples);
    }
    c.max_lanes = j.value("max_lanes", c.max_lanes);
    if (j.contains("rank") && !(j["rank"].is_string() && j["rank"] == "auto")) {
      c.rank = j["rank"].get<std::size_t>();
    }
    if (j.contains("kappa") && !(j["kappa"].is_string() && j["kappa"] == "auto")) {
      c.kappa = j["kappa"].get<double>();
    }
    c.k_lanes = j.value("k_lanes", c.k_lanes);
    c.k_images = j.value("k_images", c.k_images);
    c.candidates_per_group = j.value("candidates_per_group", c.candidates_per_group);
    if (j.contains("policy")) c.policy = parse_policy(j["policy"].get<std::string>());
    c.seed = j.value("seed", c.seed);
    if (j.contains("frame")) {
      const auto& f = j["frame"];
      reject_unknown_keys(f, {"width", "height"}, where + ".frame");
      c.frame_width = f.value("width", c.frame_width);
      c.frame_height = f.value("height", c.frame_height);
    }
    c.line_width = j.value("line_width", c.line_width);
    c.validate();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(where + ": " + e.what());
  }
  return c;
}

}  // namespace detail

}  // namespace lanecurate
