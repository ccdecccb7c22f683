#pragma once

#include <vector>

#include "lanecurate/eigenlane.hpp"
#include "lanecurate/geometry.hpp"

namespace lanecurate {

struct MaskSimilarityConfig {
  /// Added once per lane by which the two masks' lane counts differ.
  double kappa = 0.0;
  void validate() const;
};

/// A lane mask with every lane already embedded in eigenlane coefficients.
using EmbeddedMask = std::vector<std::vector<double>>;

EmbeddedMask embed_mask(const LaneMask& mask, const EigenlaneBasis& basis);

/// Sum over ref lanes of the distance to the closest src lane. A src lane
/// may be the closest one for several ref lanes. Throws
/// UndefinedMatchingError when src is empty and ref is not.
double directed_cost(const EmbeddedMask& src, const EmbeddedMask& ref);
double directed_cost(const LaneMask& src, const LaneMask& ref, const EigenlaneBasis& basis);

/// Lane-mask dissimilarity: directed cost from the mask with more lanes onto
/// the one with fewer, plus kappa per missing lane. Equal counts average the
/// two directions. Symmetric in its arguments.
double mask_similarity(const EmbeddedMask& a, const EmbeddedMask& b,
                       const MaskSimilarityConfig& cfg);
double mask_similarity(const LaneMask& a, const LaneMask& b, const EigenlaneBasis& basis,
                       const MaskSimilarityConfig& cfg);

/// Mean lane_distance over all unordered lane pairs of the pool (0 for a
/// single lane).
double default_kappa(const LanePool& pool, const EigenlaneBasis& basis);

}  // namespace lanecurate
