#include <doctest.h>

#include <cmath>
#include <fstream>

#include "lanecurate/error.hpp"
#include "lanecurate/lane_file.hpp"
#include "lanecurate/manifest.hpp"
#include "lanecurate/raster.hpp"
#include "test_support.hpp"

using namespace lanecurate;
using lanecurate::testing::Rng;
using lanecurate::testing::TempDir;

namespace {

const RowGrid kSmall{150.0, 250.0, 3};

void touch(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p) << "x";
}

}  // namespace

TEST_CASE("lane file read example") {
  const auto c = parse_lane_text("100 250 200 150\n", kSmall, "s");
  REQUIRE(c.mask.lanes.size() == 1);
  CHECK(c.mask.scene_id == "s");
  CHECK(c.mask.lanes[0].xs == std::vector<double>{200, 150, 100});
  CHECK(c.mask.lanes[0].valid_count() == 3);
  CHECK(parse_lane_text("", kSmall).mask.lanes.empty());
  CHECK(parse_lane_text("\n\n", kSmall).mask.lanes.empty());
}

TEST_CASE("lane file write example") {
  LaneMask m;
  m.lanes.push_back(testing::lane_from({200, 150, 100}));
  CHECK(lane_file_text(m, kSmall) == "100.00 250 150.00 200 200.00 150\n");
  CHECK(lane_file_text(LaneMask{}, kSmall).empty());
}

TEST_CASE("lane file grammar errors carry the line number") {
  try {
    parse_lane_text("100 250 100", kSmall);
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    parse_lane_text("1 200 2 150\n1 2 x 4\n", kSmall);
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_lane_text("1 200 inf 150", kSmall), ParseError);
}

TEST_CASE("lines with a single distinct row are skipped and counted") {
  const auto c = parse_lane_text("10 200 20 200\n100 250 200 150\n5 180\n", kSmall);
  CHECK(c.mask.lanes.size() == 1);
  CHECK(c.skipped_lines == 2);
}

TEST_CASE("lane file round trip on random masks") {
  Rng rng(61);
  const RowGrid grid;
  TempDir dir;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    LaneMask m;
    m.scene_id = "scene_" + std::to_string(t);
    const std::size_t lanes = rng.index(5);
    for (std::size_t l = 0; l < lanes; ++l) {
      // Resample a random monotone curve so the valid span is contiguous.
      const double y0 = rng.uniform(grid.y_top - 20, grid.y_top + 60);
      std::vector<Pixel> curve;
      for (double y = 255.0; y >= y0; y -= rng.uniform(3, 15)) curve.push_back({rng.uniform(0, 768), y});
      if (curve.size() < 2) continue;
      const auto lane = resample_lane(curve, grid);
      if (lane.valid_count() >= 2) m.lanes.push_back(lane);
    }
    const auto path = dir / (m.scene_id + ".lines.txt");
    write_lane_file(m, grid, path);
    const auto back = read_lane_file(path, grid);
    CHECK(back.mask.scene_id == m.scene_id);
    REQUIRE(back.mask.lanes.size() == m.lanes.size());
    for (std::size_t l = 0; l < m.lanes.size(); ++l) {
      CHECK(back.mask.lanes[l].valid == m.lanes[l].valid);
      for (std::size_t k = 0; k < grid.samples; ++k) {
        if (m.lanes[l].valid[k]) worst = std::max(worst, std::abs(back.mask.lanes[l].xs[k] - m.lanes[l].xs[k]));
      }
    }
    CHECK(lane_file_text(back.mask, grid) == lane_file_text(m, grid));
  }
  CHECK(worst <= 0.005 + 1e-9);
}

TEST_CASE("scene ids from paths") {
  CHECK(scene_id_from_path("a/b/scene_00001.lines.txt") == "scene_00001");
  CHECK(scene_id_from_path("x.txt") == "x");
  CHECK_THROWS_AS(read_lane_file("/nonexistent/a.lines.txt", kSmall), IoError);
}

TEST_CASE("raster examples") {
  const RowGrid grid{10.0, 30.0, 5};
  const auto empty = rasterize_mask(LaneMask{}, grid, 40, 40);
  CHECK(empty.width == 40);
  CHECK(empty.height == 40);
  for (double v : empty.pixels) CHECK(v == 0.0);

  LaneMask m;
  m.lanes.push_back(testing::lane_from(std::vector<double>(5, 10.0)));
  const auto img = rasterize_mask(m, grid, 40, 40);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) {
      const bool on = x == 10 && y >= 10 && y <= 30;
      CHECK(img.at(x, y) == (on ? 1.0 : 0.0));
    }
  }
  auto twice = m;
  twice.lanes.push_back(m.lanes[0]);
  CHECK(rasterize_mask(twice, grid, 40, 40) == img);

  const auto thick = rasterize_mask(m, grid, 40, 40, 3);
  CHECK(thick.at(9, 20) == 1.0);
  CHECK(thick.at(11, 20) == 1.0);
  CHECK(thick.at(12, 20) == 0.0);
  CHECK(thick.at(10, 9) == 1.0);
}

TEST_CASE("raster size and values on random masks") {
  Rng rng(62);
  const RowGrid grid;
  for (int t = 0; t < 50; ++t) {
    const int w = 1 + static_cast<int>(rng.index(300));
    const int h = 1 + static_cast<int>(rng.index(300));
    auto m = testing::random_mask(rng, grid.samples);
    for (auto& lane : m.lanes) {
      for (std::size_t k = 0; k < 10; ++k) lane.valid[rng.index(grid.samples)] = false;
      lane.xs[rng.index(grid.samples)] = rng.uniform(-1e9, 1e9);
    }
    const auto img = rasterize_mask(m, grid, w, h, 1 + static_cast<int>(rng.index(5)));
    CHECK(img.width == w);
    CHECK(img.height == h);
    for (double v : img.pixels) CHECK((v == 0.0 || v == 1.0));
  }
}

TEST_CASE("manifest round trip and determinism") {
  TempDir dir;
  Manifest m;
  m.config.kappa = 12.5;
  m.config.rank = 3;
  m.config.seed = 7;
  m.entries.push_back({"s1", "lanes/s1.lines.txt", {"img/a.ppm", "img/b.ppm"}, "s1"});
  m.entries.push_back({"s2", "lanes/s2.lines.txt", {}, "g"});
  write_manifest(m, dir / "manifest.json");
  const auto back = read_manifest(dir / "manifest.json", false);
  CHECK(back == m);
  const std::string text = manifest_to_json(m);
  CHECK(text == manifest_to_json(back));
  CHECK(text.back() == '\n');
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("\"config\"") < text.find("\"entries\""));

  Manifest d;
  CHECK(manifest_from_json(manifest_to_json(d)) == d);
}

TEST_CASE("manifest parsing rejects unknown keys and bad shapes") {
  CHECK_THROWS_AS(manifest_from_json("{\"entries\": [], \"extra\": 1}"), ParseError);
  CHECK_THROWS_AS(manifest_from_json("{\"entries\": [{\"id\": \"a\", \"lane_file\": \"a\", \"bogus\": 1}]}"),
                  ParseError);
  CHECK_THROWS_AS(manifest_from_json("{\"entries\": 3}"), ParseError);
  CHECK_THROWS_AS(manifest_from_json("not json"), ParseError);
  const auto m = manifest_from_json("{\"entries\": [{\"id\": \"a\", \"lane_file\": \"a.txt\"}]}");
  CHECK(m.entries[0].group_id == "a");
  CHECK(m.entries[0].image_files.empty());
  CHECK(m.config == PipelineConfig{});
}

TEST_CASE("manifest validation") {
  TempDir dir;
  Manifest m;
  m.entries.push_back({"s1", "a.txt", {}, "s1"});
  m.entries.push_back({"s1", "b.txt", {}, "s1"});
  try {
    validate_manifest(m, dir.path(), false);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("s1") != std::string::npos);
  }

  m.entries[1] = {"s2", "a.txt", {}, "s2"};
  CHECK_THROWS_AS(validate_manifest(m, dir.path(), false), ValidationError);

  m.entries[1].lane_file = "b.txt";
  try {
    validate_manifest(m, dir.path(), true);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("a.txt") != std::string::npos);
    CHECK(msg.find("b.txt") != std::string::npos);
  }
}

TEST_CASE("three groups of one hundred candidates validate") {
  TempDir dir;
  Manifest m;
  for (int e = 0; e < 3; ++e) {
    ManifestEntry entry;
    entry.id = "s" + std::to_string(e);
    entry.group_id = entry.id;
    entry.lane_file = "lanes/" + entry.id + ".lines.txt";
    touch(dir / entry.lane_file);
    for (int i = 0; i < 100; ++i) {
      entry.image_files.push_back("img/" + entry.id + "_" + std::to_string(i) + ".pgm");
      touch(dir / entry.image_files.back());
    }
    m.entries.push_back(entry);
  }
  CHECK_NOTHROW(validate_manifest(m, dir.path()));
  CHECK(m.config.candidates_per_group == 100);
  write_manifest(m, dir / "manifest.json");
  CHECK(read_manifest(dir / "manifest.json") == m);
}

TEST_CASE("path resolution") {
  CHECK(resolve_path("/base", "x/y.txt") == std::filesystem::path("/base/x/y.txt"));
  CHECK(resolve_path("/base", "/abs/y.txt") == std::filesystem::path("/abs/y.txt"));
}
