#include "lanecurate/lane_file.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "file_util.hpp"
#include "lanecurate/error.hpp"
#include "lanecurate/text_format.hpp"

namespace lanecurate {

namespace {

std::vector<double> parse_line(std::string_view line, std::size_t line_no, const std::string& name) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    if (pos == line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    const std::string_view token = line.substr(pos, end - pos);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw ParseError(name + ": line " + std::to_string(line_no) + ": malformed token '" +
                           std::string(token) + "'",
                       line_no);
    }
    values.push_back(v);
    pos = end;
  }
  if (values.size() % 2 != 0) {
    throw ParseError(name + ": line " + std::to_string(line_no) + ": odd number of coordinates",
                     line_no);
  }
  return values;
}

}  // namespace

LaneFileContents parse_lane_text(const std::string& text, const RowGrid& grid, std::string scene_id,
                                 const std::string& name) {
  LaneFileContents out;
  out.mask.scene_id = std::move(scene_id);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    const auto values = parse_line(std::string_view(text).substr(start, end - start), line_no, name);
    start = end + 1;
    if (values.empty()) continue;

    std::vector<Pixel> curve;
    std::set<double> rows;
    for (std::size_t i = 0; i < values.size(); i += 2) {
      curve.push_back({values[i], values[i + 1]});
      rows.insert(values[i + 1]);
    }
    if (rows.size() < 2) {
      ++out.skipped_lines;
      continue;
    }
    out.mask.lanes.push_back(resample_lane(std::move(curve), grid));
  }
  return out;
}

std::string scene_id_from_path(const std::filesystem::path& path) {
  std::string stem = path.filename().string();
  for (const char* suffix : {".lines.txt", ".txt"}) {
    const std::string s(suffix);
    if (stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0) {
      return stem.substr(0, stem.size() - s.size());
    }
  }
  return path.stem().string();
}

LaneFileContents read_lane_file(const std::filesystem::path& path, const RowGrid& grid) {
  return parse_lane_text(detail::read_file(path), grid, scene_id_from_path(path), path.string());
}

std::string lane_file_text(const LaneMask& mask, const RowGrid& grid) {
  grid.validate();
  std::string out;
  for (const auto& lane : mask.lanes) {
    if (lane.size() != grid.samples) {
      throw ParameterError("lane has " + std::to_string(lane.size()) + " samples, grid has " +
                           std::to_string(grid.samples));
    }
    bool first = true;
    for (std::size_t k = grid.samples; k-- > 0;) {
      if (!lane.valid[k]) continue;
      if (!first) out += ' ';
      out += format_fixed2(lane.xs[k]);
      out += ' ';
      out += format_shortest(grid.row(k));
      first = false;
    }
    out += '\n';
  }
  return out;
}

void write_lane_file(const LaneMask& mask, const RowGrid& grid, const std::filesystem::path& path) {
  detail::write_file(path, lane_file_text(mask, grid));
}

}  // namespace lanecurate
