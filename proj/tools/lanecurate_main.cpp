// lanecurate: lane-mask extraction, eigenlane embedding and diversity-driven
// coreset selection for lane-detection datasets.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <thread>

#include "lanecurate/coreset.hpp"
#include "lanecurate/eigenlane.hpp"
#include "lanecurate/error.hpp"
#include "lanecurate/manifest.hpp"
#include "lanecurate/pipeline.hpp"
#include "lanecurate/similarity_file.hpp"
#include "lanecurate/synthetic_map.hpp"

namespace fs = std::filesystem;
using namespace lanecurate;

namespace {

// Flags shared by the pipeline subcommands. Only flags given on the command
// line override the config echoed in an input manifest.
struct ConfigFlags {
  double grid_top = 128.0;
  double grid_bottom = 255.0;
  std::size_t samples = 50;
  std::size_t max_lanes = kDefaultMaxLanes;
  std::string rank = "auto";
  std::string kappa = "auto";
  std::size_t k_lanes = 20;
  std::size_t k_images = kDefaultImagesPerGroup;
  std::string policy = "to-selected";
  std::uint64_t seed = 0;
  int line_width = 3;
  int score_width = kFrameWidth;
  int score_height = kFrameHeight;

  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* app, std::initializer_list<const char*> which) {
    for (const std::string name : which) {
      CLI::Option* opt = nullptr;
      if (name == "grid") {
        options.emplace_back("grid-top", app->add_option("--grid-top", grid_top, "Top sampling row"));
        options.emplace_back("grid-bottom",
                             app->add_option("--grid-bottom", grid_bottom, "Bottom sampling row"));
        options.emplace_back("samples",
                             app->add_option("--samples", samples, "Rows per lane (P)"));
        continue;
      }
      if (name == "max-lanes") opt = app->add_option("--max-lanes", max_lanes, "Lane cap per mask");
      if (name == "rank") opt = app->add_option("--rank", rank, "Basis rank or 'auto'");
      if (name == "kappa") opt = app->add_option("--kappa", kappa, "Lane-count penalty or 'auto'");
      if (name == "k-lanes") opt = app->add_option("--k-lanes", k_lanes, "Masks to select");
      if (name == "k-images") opt = app->add_option("--k-images", k_images, "Images to keep per group");
      if (name == "policy") {
        opt = app->add_option("--policy", policy, "to-selected or to-unselected")
                  ->check(CLI::IsMember({"to-selected", "to-unselected"}));
      }
      if (name == "seed") opt = app->add_option("--seed", seed, "Seed echoed into the config");
      if (name == "line-width") opt = app->add_option("--line-width", line_width, "Raster stroke width");
      if (name == "score-size") {
        options.emplace_back("score-width",
                             app->add_option("--score-width", score_width, "Scoring width"));
        options.emplace_back("score-height",
                             app->add_option("--score-height", score_height, "Scoring height"));
        continue;
      }
      options.emplace_back(name, opt);
    }
  }

  bool given(const std::string& name) const {
    for (const auto& [n, opt] : options) {
      if (n == name) return opt->count() > 0;
    }
    return false;
  }

  PipelineConfig apply(PipelineConfig c) const {
    if (given("grid-top")) c.grid.y_top = grid_top;
    if (given("grid-bottom")) c.grid.y_bottom = grid_bottom;
    if (given("samples")) c.grid.samples = samples;
    if (given("max-lanes")) c.max_lanes = max_lanes;
    if (given("rank")) c.rank = rank == "auto" ? std::nullopt : std::optional(std::stoul(rank));
    if (given("kappa")) c.kappa = kappa == "auto" ? std::nullopt : std::optional(std::stod(kappa));
    if (given("k-lanes")) c.k_lanes = k_lanes;
    if (given("k-images")) c.k_images = k_images;
    if (given("policy")) c.policy = parse_policy(policy);
    if (given("seed")) c.seed = seed;
    if (given("line-width")) c.line_width = line_width;
    if (given("score-width")) c.frame_width = score_width;
    if (given("score-height")) c.frame_height = score_height;
    c.validate();
    return c;
  }
};

PipelineConfig manifest_config(const fs::path& manifest) {
  return read_manifest(manifest, false).config;
}

unsigned resolve_threads(unsigned threads) {
  return threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

void print_oracle(const std::vector<OracleRow>& rows) {
  const auto& exact = rows.front().exact;
  std::printf("exhaustive objective %.17g selected %s\n", exact.objective, join(exact.selected).c_str());
  for (const auto& row : rows) {
    std::printf("%-13s greedy objective %.17g ratio %.12f selected %s\n", to_string(row.policy),
                row.greedy.objective, row.ratio, join(row.greedy.selected).c_str());
  }
}

SimilarityGraph random_graph(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> w(SimilarityGraph::condensed_size(n));
  for (double& x : w) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return SimilarityGraph(n, std::move(w));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lane-mask extraction, eigenlane embedding and diverse coreset selection"};
  app.require_subcommand(1);

  // generate-map
  std::uint64_t map_seed = 7;
  std::size_t map_scenes = 200;
  MapParams map_params;
  fs::path map_out;
  auto* gen = app.add_subcommand("generate-map", "Write a synthetic HD-map scene file");
  gen->add_option("--seed", map_seed, "Generator seed");
  gen->add_option("--scenes", map_scenes, "Number of scenes");
  gen->add_option("--lanes-min", map_params.lane_count.lo, "Minimum lane lines per scene");
  gen->add_option("--lanes-max", map_params.lane_count.hi, "Maximum lane lines per scene");
  gen->add_option("--curvature-min", map_params.curvature.lo, "Minimum curvature (1/m)");
  gen->add_option("--curvature-max", map_params.curvature.hi, "Maximum curvature (1/m)");
  gen->add_option("--out", map_out, "Output JSON file")->required();

  // project
  fs::path project_map;
  fs::path project_out;
  ConfigFlags project_flags;
  auto* project = app.add_subcommand("project", "Extract lane masks from a map file");
  project->add_option("--map", project_map, "Map JSON file")->required()->check(CLI::ExistingFile);
  project->add_option("--out", project_out, "Output directory")->required();
  project_flags.add(project, {"grid", "max-lanes", "rank", "kappa", "k-lanes", "k-images", "policy",
                              "seed", "line-width"});

  // embed
  fs::path embed_manifest;
  fs::path embed_out;
  ConfigFlags embed_flags;
  auto* embed = app.add_subcommand("embed", "Fit the eigenlane basis over every lane");
  embed->add_option("--manifest", embed_manifest, "Input manifest")->required()->check(CLI::ExistingFile);
  embed->add_option("--out", embed_out, "Output basis file")->required();
  embed_flags.add(embed, {"grid", "rank"});

  // lane-select
  fs::path ls_manifest;
  fs::path ls_basis;
  fs::path ls_out;
  unsigned ls_threads = 0;
  ConfigFlags ls_flags;
  auto* lane_select = app.add_subcommand("lane-select", "Select K_lanes diverse lane masks");
  lane_select->add_option("--manifest", ls_manifest, "Input manifest")->required()->check(CLI::ExistingFile);
  lane_select->add_option("--basis", ls_basis, "Eigenlane basis file")->required()->check(CLI::ExistingFile);
  lane_select->add_option("--out", ls_out, "Output directory")->required();
  lane_select->add_option("--threads", ls_threads, "Worker threads (0 = all cores)");
  ls_flags.add(lane_select, {"grid", "kappa", "k-lanes", "policy"});

  // image-select
  fs::path is_manifest;
  fs::path is_out;
  unsigned is_threads = 0;
  ConfigFlags is_flags;
  auto* image_select = app.add_subcommand("image-select", "Keep K_images diverse images per group");
  image_select->add_option("--manifest", is_manifest, "Input manifest")->required()->check(CLI::ExistingFile);
  image_select->add_option("--out", is_out, "Output directory")->required();
  image_select->add_option("--threads", is_threads, "Worker threads (0 = all cores)");
  is_flags.add(image_select, {"k-images", "policy", "score-size"});

  // oracle
  fs::path or_lsim;
  std::string or_weights = "similarity";
  fs::path or_manifest;
  fs::path or_basis;
  std::size_t or_random = 0;
  std::size_t or_vertices = 8;
  std::uint64_t or_seed = 1;
  std::size_t or_k = 3;
  ConfigFlags or_flags;
  auto* oracle = app.add_subcommand("oracle", "Compare greedy selection with exhaustive search");
  auto* o_lsim = oracle->add_option("--lsim", or_lsim, "LSIM matrix file")->check(CLI::ExistingFile);
  oracle->add_option("--weights", or_weights,
                     "How LSIM values are read: similarity (as-is) or distance (max - value)")
      ->check(CLI::IsMember({"similarity", "distance"}));
  auto* o_manifest = oracle->add_option("--manifest", or_manifest, "Manifest of lane masks")
                         ->check(CLI::ExistingFile);
  oracle->add_option("--basis", or_basis, "Eigenlane basis (with --manifest)")->check(CLI::ExistingFile);
  auto* o_random = oracle->add_option("--random", or_random, "Number of random graphs to test");
  oracle->add_option("--vertices", or_vertices, "Vertices per random graph");
  oracle->add_option("--seed", or_seed, "Seed for random graphs");
  oracle->add_option("--k", or_k, "Subset size")->required();
  or_flags.add(oracle, {"kappa"});
  o_lsim->excludes(o_manifest)->excludes(o_random);
  o_manifest->excludes(o_random);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto scenes = generate_synthetic_map(map_seed, map_scenes, map_params);
      write_map_file(map_out, scenes);
      std::printf("wrote %zu scenes to %s\n", scenes.size(), map_out.string().c_str());
    } else if (*project) {
      const PipelineConfig cfg = project_flags.apply(PipelineConfig{});
      const auto s = run_project(project_map, project_out, cfg);
      print_warnings(s.warnings);
      std::printf("projected %zu scenes, %zu lanes -> %s\n", s.scenes, s.lanes,
                  (project_out / "manifest.json").string().c_str());
    } else if (*embed) {
      const PipelineConfig cfg = embed_flags.apply(manifest_config(embed_manifest));
      const auto s = run_embed(embed_manifest, embed_out, cfg);
      print_warnings(s.warnings);
      std::printf("L=%zu P=%zu R=%zu energy=%.6f\n", s.lanes, s.samples, s.rank, s.energy);
    } else if (*lane_select) {
      const PipelineConfig cfg = ls_flags.apply(manifest_config(ls_manifest));
      const auto s = run_lane_select(ls_manifest, ls_basis, ls_out, cfg, resolve_threads(ls_threads));
      print_warnings(s.warnings);
      std::printf("selected %zu of %zu masks (policy %s, kappa %.6g)\n", s.selection.selected.size(),
                  s.masks, s.selection.policy.c_str(), s.kappa);
      std::printf("objective %.17g  mean f selected %.6f  mean f all %.6f\n", s.selection.objective,
                  s.mean_f_selected, s.mean_f_all);
    } else if (*image_select) {
      const PipelineConfig cfg = is_flags.apply(manifest_config(is_manifest));
      const auto s = run_image_select(is_manifest, is_out, cfg, resolve_threads(is_threads));
      for (const auto& g : s.groups) {
        std::printf("group %s: kept %zu of %zu images %s\n", g.group_id.c_str(), g.indices.size(),
                    g.candidates, join(g.indices).c_str());
      }
    } else if (*oracle) {
      if (*o_random) {
        std::mt19937_64 rng(or_seed);
        std::size_t failures = 0;
        double worst = 1.0;
        for (std::size_t t = 0; t < or_random; ++t) {
          const auto rows = run_oracle(random_graph(rng, or_vertices), or_k);
          for (const auto& row : rows) {
            std::printf("graph %zu %-13s ratio %.12f\n", t, to_string(row.policy), row.ratio);
            if (row.ratio < 1.0) ++failures;
            worst = std::max(worst, row.ratio);
          }
        }
        std::printf("graphs %zu  worst ratio %.12f  ratios below 1: %zu\n", or_random, worst, failures);
        return failures == 0 ? 0 : 1;
      }
      SimilarityGraph g;
      if (*o_lsim) {
        const LsimMatrix mat = read_lsim(or_lsim);
        SimilarityGraph raw(mat.n, mat.values, mat.labels);
        g = or_weights == "distance" ? diversity_weights(raw) : raw;
      } else if (*o_manifest) {
        if (or_basis.empty()) throw ParameterError("--manifest needs --basis");
        const PipelineConfig cfg = or_flags.apply(manifest_config(or_manifest));
        const Manifest m = read_manifest(or_manifest);
        const auto loaded = load_masks(m, or_manifest.parent_path(), cfg.grid);
        const EigenlaneBasis basis = read_basis_file(or_basis);
        const double kappa = cfg.kappa ? *cfg.kappa
                                       : default_kappa(pool_from_masks(loaded.masks, basis.samples()), basis);
        std::vector<std::string> ids;
        for (const auto& e : m.entries) ids.push_back(e.id);
        g = diversity_weights(mask_dissimilarity_graph(loaded.masks, basis, kappa, ids, 1));
      } else {
        throw ParameterError("oracle needs one of --lsim, --manifest or --random");
      }
      print_oracle(run_oracle(g, or_k));
    }
  } catch (const Error& e) {
    std::cerr << "lanecurate: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "lanecurate: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
