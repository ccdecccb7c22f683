#include "lanecurate/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "config_json.hpp"
#include "file_util.hpp"
#include "lanecurate/error.hpp"
#include "lanecurate/image.hpp"
#include "lanecurate/lane_file.hpp"
#include "lanecurate/raster.hpp"
#include "lanecurate/similarity_file.hpp"
#include "lanecurate/ssim.hpp"
#include "lanecurate/synthetic_map.hpp"

namespace lanecurate {

namespace fs = std::filesystem;

std::string relative_to(const fs::path& target, const fs::path& dir) {
  const fs::path t = fs::absolute(target).lexically_normal();
  const fs::path d = fs::absolute(dir).lexically_normal();
  fs::path rel = t.lexically_relative(d);
  if (rel.empty()) rel = t;
  return rel.generic_string();
}

ProjectSummary run_project(const fs::path& map_file, const fs::path& out_dir,
                           const PipelineConfig& cfg) {
  cfg.validate();
  const auto scenes = read_map_file(map_file);

  std::set<std::string> seen;
  for (const auto& sc : scenes) {
    if (!seen.insert(sc.scene_id).second) {
      throw ValidationError(map_file.string() + ": duplicate scene id \"" + sc.scene_id + "\"");
    }
  }

  ProjectSummary summary;
  Manifest manifest;
  manifest.config = cfg;
  for (const auto& sc : scenes) {
    LaneMask mask;
    try {
      mask = extract_lane_mask(sc.lanes, sc.camera, cfg.grid, cfg.max_lanes, sc.scene_id);
    } catch (const ParameterError& e) {
      throw ParameterError(map_file.string() + ": scene \"" + sc.scene_id + "\": " + e.what());
    }
    if (mask.empty()) summary.warnings.push_back("scene \"" + sc.scene_id + "\" has no visible lanes");
    const std::string lane_rel = "lanes/" + sc.scene_id + ".lines.txt";
    const std::string mask_rel = "masks/" + sc.scene_id + ".pgm";
    write_lane_file(mask, cfg.grid, out_dir / lane_rel);
    write_pgm(out_dir / mask_rel,
              rasterize_mask(mask, cfg.grid, sc.camera.width, sc.camera.height, cfg.line_width));
    manifest.entries.push_back({sc.scene_id, lane_rel, {}, sc.scene_id});
    summary.lanes += mask.size();
    ++summary.scenes;
  }
  write_manifest(manifest, out_dir / "manifest.json");
  return summary;
}

LoadedMasks load_masks(const Manifest& m, const fs::path& base_dir, const RowGrid& grid) {
  LoadedMasks out;
  out.masks.reserve(m.entries.size());
  for (const auto& e : m.entries) {
    auto contents = read_lane_file(resolve_path(base_dir, e.lane_file), grid);
    contents.mask.scene_id = e.id;
    if (contents.skipped_lines > 0) {
      out.warnings.push_back(e.lane_file + ": skipped " + std::to_string(contents.skipped_lines) +
                             " degenerate line(s)");
    }
    out.masks.push_back(std::move(contents.mask));
  }
  return out;
}

LanePool pool_from_masks(const std::vector<LaneMask>& masks, std::size_t samples) {
  LanePool pool(samples);
  for (const auto& mask : masks) pool.add_mask(mask);
  return pool;
}

EmbedSummary run_embed(const fs::path& manifest_path, const fs::path& basis_out,
                       const PipelineConfig& cfg) {
  cfg.validate();
  const Manifest m = read_manifest(manifest_path);
  auto loaded = load_masks(m, manifest_path.parent_path(), cfg.grid);
  const LanePool pool = pool_from_masks(loaded.masks, cfg.grid.samples);
  if (pool.empty()) throw DataError(manifest_path.string() + ": lane pool is empty");

  const EigenlaneBasis basis = fit_basis(pool, cfg.rank);
  write_basis_file(basis_out, basis);

  EmbedSummary s;
  s.lanes = pool.size();
  s.samples = pool.samples();
  s.rank = basis.rank();
  s.energy = basis.energy_captured();
  s.warnings = std::move(loaded.warnings);
  return s;
}

SimilarityGraph mask_dissimilarity_graph(const std::vector<LaneMask>& masks,
                                         const EigenlaneBasis& basis, double kappa,
                                         std::vector<std::string> labels, unsigned threads) {
  std::vector<EmbeddedMask> embedded;
  embedded.reserve(masks.size());
  for (const auto& mask : masks) embedded.push_back(embed_mask(mask, basis));
  const MaskSimilarityConfig msc{kappa};
  msc.validate();
  return build_graph(
      masks.size(),
      [&](std::size_t i, std::size_t j) { return mask_similarity(embedded[i], embedded[j], msc); },
      std::move(labels), threads);
}

SimilarityGraph diversity_weights(const SimilarityGraph& dissimilarity) {
  const auto& w = dissimilarity.weights();
  const double max_f = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
  return dissimilarity.transformed([max_f](double f) { return max_f - f; });
}

double mean_pairwise(const SimilarityGraph& g, std::span<const std::size_t> subset) {
  const double pairs = static_cast<double>(subset.size()) * (subset.size() - 1) / 2.0;
  return pairs > 0 ? objective(g, subset) / pairs : 0.0;
}

namespace {

nlohmann::json selection_json(const SelectionResult& r, const std::vector<std::string>& labels) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t rank = 0; rank < r.selected.size(); ++rank) {
    arr.push_back({{"order", rank}, {"index", r.selected[rank]}, {"id", labels[r.selected[rank]]}});
  }
  return arr;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  detail::write_file(path, j.dump(2) + "\n");
}

}  // namespace

LaneSelectSummary run_lane_select(const fs::path& manifest_path, const fs::path& basis_path,
                                  const fs::path& out_dir, const PipelineConfig& cfg,
                                  unsigned threads) {
  cfg.validate();
  const Manifest m = read_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();
  auto loaded = load_masks(m, base, cfg.grid);
  const std::size_t n = loaded.masks.size();
  if (cfg.k_lanes >= n) {
    throw ParameterError("K_lanes=" + std::to_string(cfg.k_lanes) + " must be smaller than the " +
                         std::to_string(n) + " masks in " + manifest_path.string());
  }
  const EigenlaneBasis basis = read_basis_file(basis_path);
  if (basis.samples() != cfg.grid.samples) {
    throw ParameterError(basis_path.string() + ": basis has P=" + std::to_string(basis.samples()) +
                         " but the grid has " + std::to_string(cfg.grid.samples) + " samples");
  }

  LaneSelectSummary s;
  s.masks = n;
  s.kappa = cfg.kappa ? *cfg.kappa : default_kappa(pool_from_masks(loaded.masks, basis.samples()), basis);
  for (const auto& e : m.entries) s.ids.push_back(e.id);

  const SimilarityGraph f = mask_dissimilarity_graph(loaded.masks, basis, s.kappa, s.ids, threads);
  const SimilarityGraph w = diversity_weights(f);
  s.max_f = f.weights().empty() ? 0.0 : *std::max_element(f.weights().begin(), f.weights().end());
  s.selection = greedy_select(w, cfg.k_lanes, cfg.policy);
  s.mean_f_selected = mean_pairwise(f, s.selection.selected);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  s.mean_f_all = mean_pairwise(f, all);
  s.warnings = std::move(loaded.warnings);

  write_lsim(out_dir / "lane_similarity.lsim", {n, f.weights(), s.ids});

  nlohmann::json report;
  report["config"] = detail::config_to_json(cfg);
  report["policy"] = s.selection.policy;
  report["k"] = cfg.k_lanes;
  report["masks"] = n;
  report["kappa"] = s.kappa;
  report["max_f"] = s.max_f;
  report["objective"] = s.selection.objective;
  report["f_sum"] = objective(f, s.selection.selected);
  report["mean_f_selected"] = s.mean_f_selected;
  report["mean_f_all"] = s.mean_f_all;
  report["selected"] = selection_json(s.selection, s.ids);
  report["similarity_file"] = "lane_similarity.lsim";
  write_json(out_dir / "lane_selection.json", report);

  Manifest selected;
  selected.config = cfg;
  std::vector<std::size_t> order = s.selection.selected;
  std::sort(order.begin(), order.end());
  for (std::size_t idx : order) {
    ManifestEntry e = m.entries[idx];
    e.lane_file = relative_to(resolve_path(base, e.lane_file), out_dir);
    for (auto& img : e.image_files) img = relative_to(resolve_path(base, img), out_dir);
    selected.entries.push_back(std::move(e));
  }
  write_manifest(selected, out_dir / "selected_manifest.json");
  return s;
}

ImageSelectSummary run_image_select(const fs::path& manifest_path, const fs::path& out_dir,
                                    const PipelineConfig& cfg, unsigned threads) {
  cfg.validate();
  const Manifest m = read_manifest(manifest_path);
  const fs::path base = manifest_path.parent_path();
  const SsimParams params;

  // Groups in order of first appearance; candidates in entry then file order.
  struct Candidate {
    std::size_t entry;
    std::string file;
  };
  std::vector<std::string> group_order;
  std::map<std::string, std::vector<Candidate>> groups;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    if (!groups.count(e.group_id)) group_order.push_back(e.group_id);
    auto& g = groups[e.group_id];
    for (const auto& f : e.image_files) g.push_back({i, f});
  }
  for (const auto& id : group_order) {
    if (groups[id].size() < cfg.k_images) {
      throw DataError("group \"" + id + "\" has " + std::to_string(groups[id].size()) +
                      " candidate image(s), fewer than K_images=" + std::to_string(cfg.k_images));
    }
  }

  ImageSelectSummary summary;
  std::vector<std::set<std::string>> keep(m.entries.size());
  for (const auto& id : group_order) {
    const auto& cands = groups[id];
    GroupSelection gs;
    gs.group_id = id;
    gs.candidates = cands.size();

    if (cfg.k_images == 1) {
      gs.indices = {0};
    } else {
      std::vector<SsimPyramid> images;
      images.reserve(cands.size());
      std::vector<std::string> labels;
      for (const auto& c : cands) {
        const fs::path p = resolve_path(base, c.file);
        images.push_back(prepare_ms_ssim(
            resize_for_scoring(load_gray(p), cfg.frame_width, cfg.frame_height), params));
        labels.push_back(c.file);
      }
      const SimilarityGraph g = build_graph(
          images.size(),
          [&](std::size_t i, std::size_t j) { return ms_ssim(images[i], images[j], params); },
          labels, threads);
      const SelectionResult r = greedy_select(g, cfg.k_images, cfg.policy);
      gs.indices = r.selected;
      gs.objective = r.objective;
    }
    for (std::size_t idx : gs.indices) {
      const auto& c = cands[idx];
      keep[c.entry].insert(c.file);
      gs.files.push_back(relative_to(resolve_path(base, c.file), out_dir));
    }
    summary.groups.push_back(std::move(gs));
  }

  Manifest updated;
  updated.config = cfg;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    ManifestEntry e = m.entries[i];
    std::vector<std::string> files;
    for (const auto& f : e.image_files) {
      if (keep[i].count(f)) files.push_back(relative_to(resolve_path(base, f), out_dir));
    }
    e.image_files = std::move(files);
    e.lane_file = relative_to(resolve_path(base, e.lane_file), out_dir);
    updated.entries.push_back(std::move(e));
  }
  write_manifest(updated, out_dir / "manifest.json");

  nlohmann::json report;
  report["config"] = detail::config_to_json(cfg);
  report["groups"] = nlohmann::json::array();
  for (const auto& gs : summary.groups) {
    report["groups"].push_back({{"group_id", gs.group_id},
                                {"candidates", gs.candidates},
                                {"indices", gs.indices},
                                {"selected", gs.files},
                                {"objective", gs.objective}});
  }
  write_json(out_dir / "image_selection.json", report);
  return summary;
}

double objective_ratio(double greedy, double optimal) {
  if (optimal == 0.0) return greedy == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return greedy / optimal;
}

std::vector<OracleRow> run_oracle(const SimilarityGraph& g, std::size_t k) {
  const SelectionResult exact = exhaustive_select(g, k);
  std::vector<OracleRow> rows;
  for (auto policy : {SelectionPolicy::kToSelected, SelectionPolicy::kToUnselected}) {
    OracleRow row;
    row.policy = policy;
    row.greedy = greedy_select(g, k, policy);
    row.exact = exact;
    row.ratio = objective_ratio(row.greedy.objective, exact.objective);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lanecurate
