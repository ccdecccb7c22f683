#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lanecurate/config.hpp"

namespace lanecurate {

/// One lane mask and the candidate surrounding images generated for it.
/// Paths are relative to the manifest's directory unless absolute.
struct ManifestEntry {
  std::string id;
  std::string lane_file;
  std::vector<std::string> image_files;
  std::string group_id;  // defaults to id
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  PipelineConfig config;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Sorted keys, two-space indent, LF, trailing newline.
std::string manifest_to_json(const Manifest& m);
/// Rejects unknown keys. Throws ParseError.
Manifest manifest_from_json(const std::string& text, const std::string& name = "<memory>");

/// Throws ValidationError listing every duplicate id, lane file referenced
/// more than once and, when check_files is set, every missing file.
void validate_manifest(const Manifest& m, const std::filesystem::path& base_dir,
                       bool check_files = true);

void write_manifest(const Manifest& m, const std::filesystem::path& path);
/// Parses and validates against the manifest's own directory.
Manifest read_manifest(const std::filesystem::path& path, bool check_files = true);

/// Resolves a manifest path against the manifest's directory.
std::filesystem::path resolve_path(const std::filesystem::path& base_dir, const std::string& p);

}  // namespace lanecurate
