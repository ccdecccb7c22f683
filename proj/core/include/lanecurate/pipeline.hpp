#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lanecurate/config.hpp"
#include "lanecurate/coreset.hpp"
#include "lanecurate/eigenlane.hpp"
#include "lanecurate/geometry.hpp"
#include "lanecurate/manifest.hpp"
#include "lanecurate/mask_similarity.hpp"

namespace lanecurate {

// Pipeline stages behind the command-line tool. Every stage is a pure
// function of its inputs and config; `threads` only changes wall time.

struct ProjectSummary {
  std::size_t scenes = 0;
  std::size_t lanes = 0;
  std::vector<std::string> warnings;
};

/// Writes lanes/<scene>.lines.txt, masks/<scene>.pgm and manifest.json
/// under out_dir.
ProjectSummary run_project(const std::filesystem::path& map_file,
                           const std::filesystem::path& out_dir, const PipelineConfig& cfg);

struct LoadedMasks {
  std::vector<LaneMask> masks;  // manifest order
  std::vector<std::string> warnings;
};
LoadedMasks load_masks(const Manifest& m, const std::filesystem::path& base_dir,
                       const RowGrid& grid);

LanePool pool_from_masks(const std::vector<LaneMask>& masks, std::size_t samples);

struct EmbedSummary {
  std::size_t lanes = 0;  // L
  std::size_t samples = 0;  // P
  std::size_t rank = 0;  // R
  double energy = 0.0;
  std::vector<std::string> warnings;
};

/// Fits the eigenlane basis over every lane of every mask. DataError on an
/// empty pool.
EmbedSummary run_embed(const std::filesystem::path& manifest_path,
                       const std::filesystem::path& basis_out, const PipelineConfig& cfg);

/// Raw pairwise mask dissimilarity f for every pair of masks.
SimilarityGraph mask_dissimilarity_graph(const std::vector<LaneMask>& masks,
                                         const EigenlaneBasis& basis, double kappa,
                                         std::vector<std::string> labels, unsigned threads);

/// Turns dissimilarities into similarity weights w = max f - f.
SimilarityGraph diversity_weights(const SimilarityGraph& dissimilarity);

/// Mean of f over the unordered pairs of `subset`.
double mean_pairwise(const SimilarityGraph& g, std::span<const std::size_t> subset);

struct LaneSelectSummary {
  std::size_t masks = 0;
  double kappa = 0.0;
  double max_f = 0.0;
  double mean_f_selected = 0.0;
  double mean_f_all = 0.0;
  SelectionResult selection;
  std::vector<std::string> ids;
  std::vector<std::string> warnings;
};

/// Writes lane_selection.json, lane_similarity.lsim (raw f) and
/// selected_manifest.json under out_dir.
LaneSelectSummary run_lane_select(const std::filesystem::path& manifest_path,
                                  const std::filesystem::path& basis_path,
                                  const std::filesystem::path& out_dir, const PipelineConfig& cfg,
                                  unsigned threads = 1);

struct GroupSelection {
  std::string group_id;
  std::size_t candidates = 0;
  std::vector<std::size_t> indices;
  std::vector<std::string> files;  // as written in the output manifest
  double objective = 0.0;
};

struct ImageSelectSummary {
  std::vector<GroupSelection> groups;
};

/// Scores each group's candidates with MS-SSIM after resizing to the frame
/// size and keeps K_images of them. Writes image_selection.json and
/// manifest.json under out_dir.
ImageSelectSummary run_image_select(const std::filesystem::path& manifest_path,
                                    const std::filesystem::path& out_dir,
                                    const PipelineConfig& cfg, unsigned threads = 1);

struct OracleRow {
  SelectionPolicy policy;
  SelectionResult greedy;
  SelectionResult exact;
  double ratio = 1.0;
};

/// Greedy under both policies against exhaustive search.
std::vector<OracleRow> run_oracle(const SimilarityGraph& g, std::size_t k);

/// greedy / optimal, 1 when both are zero.
double objective_ratio(double greedy, double optimal);

/// Path of `target` relative to `dir`, with forward slashes.
std::string relative_to(const std::filesystem::path& target, const std::filesystem::path& dir);

}  // namespace lanecurate
