#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "lanecurate/coreset.hpp"
#include "lanecurate/geometry.hpp"

namespace lanecurate {

inline constexpr std::size_t kDefaultImagesPerGroup = 5;
inline constexpr std::size_t kDefaultCandidatesPerGroup = 100;
inline constexpr int kFrameWidth = 768;
inline constexpr int kFrameHeight = 256;

/// Settings shared by every pipeline stage. Echoed into manifests and
/// selection reports.
struct PipelineConfig {
  RowGrid grid{128.0, 255.0, 50};
  std::size_t max_lanes = kDefaultMaxLanes;
  std::optional<std::size_t> rank;  // nullopt: smallest rank with 99% energy
  std::optional<double> kappa;      // nullopt: mean pairwise lane distance
  std::size_t k_lanes = 20;
  std::size_t k_images = kDefaultImagesPerGroup;
  std::size_t candidates_per_group = kDefaultCandidatesPerGroup;
  SelectionPolicy policy = SelectionPolicy::kToSelected;
  std::uint64_t seed = 0;
  int frame_width = kFrameWidth;
  int frame_height = kFrameHeight;
  int line_width = 3;

  void validate() const;
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

}  // namespace lanecurate
