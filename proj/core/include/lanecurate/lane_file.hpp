#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "lanecurate/geometry.hpp"

namespace lanecurate {

// Lane label text: one lane per line as space-separated "x y" pixel pairs,
// listed bottom to top.

struct LaneFileContents {
  LaneMask mask;
  /// Lines dropped because they had fewer than two distinct rows.
  std::size_t skipped_lines = 0;
};

/// Throws ParseError carrying the 1-based line number on a bad token or an
/// odd token count.
LaneFileContents parse_lane_text(const std::string& text, const RowGrid& grid,
                                 std::string scene_id = {}, const std::string& name = "<memory>");
/// The scene id is the file name without its ".lines.txt" or other extension.
LaneFileContents read_lane_file(const std::filesystem::path& path, const RowGrid& grid);

/// Valid rows only, x with two decimals, y in shortest round-trip form.
std::string lane_file_text(const LaneMask& mask, const RowGrid& grid);
void write_lane_file(const LaneMask& mask, const RowGrid& grid, const std::filesystem::path& path);

std::string scene_id_from_path(const std::filesystem::path& path);

}  // namespace lanecurate
