#include "lanecurate/manifest.hpp"

#include <map>
#include <set>

#include "config_json.hpp"
#include "file_util.hpp"
#include "lanecurate/error.hpp"

namespace lanecurate {

std::string manifest_to_json(const Manifest& m) {
  nlohmann::json j;
  j["config"] = detail::config_to_json(m.config);
  j["entries"] = nlohmann::json::array();
  for (const auto& e : m.entries) {
    j["entries"].push_back({{"id", e.id},
                            {"lane_file", e.lane_file},
                            {"image_files", e.image_files},
                            {"group_id", e.group_id.empty() ? e.id : e.group_id}});
  }
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text, const std::string& name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(name + ": " + e.what());
  }
  detail::reject_unknown_keys(j, {"config", "entries"}, name);
  Manifest m;
  if (j.contains("config")) m.config = detail::config_from_json(j["config"], name + ": config");
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw ParseError(name + ": missing 'entries' array");
  }
  std::size_t index = 0;
  for (const auto& je : j["entries"]) {
    const std::string where = name + ": entries[" + std::to_string(index++) + "]";
    detail::reject_unknown_keys(je, {"id", "lane_file", "image_files", "group_id"}, where);
    ManifestEntry e;
    try {
      e.id = je.at("id").get<std::string>();
      e.lane_file = je.at("lane_file").get<std::string>();
      if (je.contains("image_files")) e.image_files = je["image_files"].get<std::vector<std::string>>();
      e.group_id = je.contains("group_id") ? je["group_id"].get<std::string>() : e.id;
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(where + ": " + ex.what());
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

std::filesystem::path resolve_path(const std::filesystem::path& base_dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

void validate_manifest(const Manifest& m, const std::filesystem::path& base_dir, bool check_files) {
  std::vector<std::string> problems;
  std::map<std::string, int> ids;
  std::map<std::string, int> lane_files;
  for (const auto& e : m.entries) {
    if (e.id.empty()) problems.push_back("entry with empty id");
    ++ids[e.id];
    ++lane_files[e.lane_file];
  }
  for (const auto& [id, count] : ids) {
    if (count > 1) problems.push_back("duplicate id \"" + id + "\"");
  }
  for (const auto& [file, count] : lane_files) {
    if (count > 1) problems.push_back("lane file \"" + file + "\" referenced " + std::to_string(count) + " times");
  }
  if (check_files) {
    std::set<std::string> reported;
    auto check = [&](const std::string& p) {
      if (!std::filesystem::exists(resolve_path(base_dir, p)) && reported.insert(p).second) {
        problems.push_back("missing file \"" + p + "\"");
      }
    };
    for (const auto& e : m.entries) {
      check(e.lane_file);
      for (const auto& img : e.image_files) check(img);
    }
  }
  if (!problems.empty()) {
    std::string msg = "manifest has " + std::to_string(problems.size()) + " problem(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (i) msg += "; ";
      msg += problems[i];
    }
    throw ValidationError(msg);
  }
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  detail::write_file(path, manifest_to_json(m));
}

Manifest read_manifest(const std::filesystem::path& path, bool check_files) {
  Manifest m = manifest_from_json(detail::read_file(path), path.string());
  validate_manifest(m, path.parent_path(), check_files);
  return m;
}

}  // namespace lanecurate
