#include "lanecurate/mask_similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lanecurate/error.hpp"

namespace lanecurate {

void MaskSimilarityConfig::validate() const {
  if (!std::isfinite(kappa) || kappa < 0.0) {
    throw ParameterError("kappa must be finite and non-negative");
  }
}

EmbeddedMask embed_mask(const LaneMask& mask, const EigenlaneBasis& basis) {
  EmbeddedMask out;
  out.reserve(mask.lanes.size());
  for (const auto& lane : mask.lanes) out.push_back(basis.embed(lane.xs));
  return out;
}

double directed_cost(const EmbeddedMask& src, const EmbeddedMask& ref) {
  if (ref.empty()) return 0.0;
  if (src.empty()) throw UndefinedMatchingError("empty source mask against non-empty reference");
  double total = 0.0;
  for (const auto& r : ref) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : src) best = std::min(best, coefficient_distance(s, r));
    total += best;
  }
  return total;
}

double directed_cost(const LaneMask& src, const LaneMask& ref, const EigenlaneBasis& basis) {
  return directed_cost(embed_mask(src, basis), embed_mask(ref, basis));
}

double mask_similarity(const EmbeddedMask& a, const EmbeddedMask& b,
                       const MaskSimilarityConfig& cfg) {
  cfg.validate();
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  if (m == n) {
    if (m == 0) return 0.0;
    return (directed_cost(a, b) + directed_cost(b, a)) / 2.0;
  }
  const EmbeddedMask& larger = m > n ? a : b;
  const EmbeddedMask& smaller = m > n ? b : a;
  const double missing = static_cast<double>(m > n ? m - n : n - m);
  return directed_cost(larger, smaller) + missing * cfg.kappa;
}

double mask_similarity(const LaneMask& a, const LaneMask& b, const EigenlaneBasis& basis,
                       const MaskSimilarityConfig& cfg) {
  return mask_similarity(embed_mask(a, basis), embed_mask(b, basis), cfg);
}

double default_kappa(const LanePool& pool, const EigenlaneBasis& basis) {
  std::vector<std::vector<double>> coeffs;
  coeffs.reserve(pool.size());
  for (const auto& col : pool.columns()) coeffs.push_back(basis.embed(col));
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    for (std::size_t j = i + 1; j < coeffs.size(); ++j) {
      sum += coefficient_distance(coeffs[i], coeffs[j]);
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

}  // namespace lanecurate
