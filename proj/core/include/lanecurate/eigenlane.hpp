#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lanecurate/geometry.hpp"

namespace lanecurate {

struct LaneSource {
  std::string scene_id;
  std::size_t lane_index = 0;
  friend bool operator==(const LaneSource&, const LaneSource&) = default;
};

/// Lane matrix: L columns of P x-coordinates each.
class LanePool {
 public:
  LanePool() = default;
  explicit LanePool(std::size_t samples) : samples_(samples) {}

  /// Throws ParameterError if the lane length disagrees with the pool.
  void add(std::span<const double> xs, LaneSource source = {});
  void add(const SampledLane& lane, LaneSource source = {}) { add(lane.xs, std::move(source)); }
  void add_mask(const LaneMask& mask);

  std::size_t samples() const { return samples_; }
  std::size_t size() const { return columns_.size(); }
  bool empty() const { return columns_.empty(); }
  const std::vector<double>& column(std::size_t i) const { return columns_[i]; }
  const std::vector<std::vector<double>>& columns() const { return columns_; }
  const std::vector<LaneSource>& sources() const { return sources_; }

 private:
  std::size_t samples_ = 0;
  std::vector<std::vector<double>> columns_;
  std::vector<LaneSource> sources_;
};

inline constexpr double kAutoRankEnergy = 0.99;

/// Leading left singular vectors of a lane matrix and all of its singular
/// values. Each basis column's first entry with magnitude above 1e-12 is
/// positive, which makes fitting reproducible bit for bit.
class EigenlaneBasis {
 public:
  EigenlaneBasis() = default;
  /// `u` is P x R row-major. Throws ParameterError on inconsistent shapes.
  EigenlaneBasis(std::size_t samples, std::size_t rank, std::vector<double> sigma,
                 std::vector<double> u);

  std::size_t samples() const { return samples_; }
  std::size_t rank() const { return rank_; }
  const std::vector<double>& sigma() const { return sigma_; }
  double u(std::size_t row, std::size_t col) const { return u_[row * rank_ + col]; }
  const std::vector<double>& u_row_major() const { return u_; }

  /// Fraction of sum(sigma^2) carried by the first `rank` values.
  double energy_captured() const;

  std::vector<double> embed(std::span<const double> xs) const;
  std::vector<double> reconstruct(std::span<const double> coefficients) const;

  friend bool operator==(const EigenlaneBasis&, const EigenlaneBasis&) = default;

 private:
  std::size_t samples_ = 0;
  std::size_t rank_ = 0;
  std::vector<double> sigma_;
  std::vector<double> u_;
};

/// Full thin SVD pieces of a P x L matrix given as L columns: all
/// min(P, L) singular values in non-increasing order and the P x P matrix of
/// left singular vectors (columns, row-major), completed to an orthonormal
/// basis. One-sided Jacobi on the transposed matrix.
struct LeftSvd {
  std::vector<double> sigma;
  std::vector<double> u;  // P x P row-major, columns sorted by singular value
};
LeftSvd left_singular_vectors(const std::vector<std::vector<double>>& columns, std::size_t rows);

/// rank == nullopt picks the smallest R whose cumulative sigma^2 reaches 99%
/// of the total.
EigenlaneBasis fit_basis(const LanePool& pool, std::optional<std::size_t> rank = std::nullopt);

std::vector<double> embed_lane(const SampledLane& lane, const EigenlaneBasis& basis);
std::vector<double> reconstruct_lane(std::span<const double> coefficients,
                                     const EigenlaneBasis& basis);
double lane_distance(const SampledLane& a, const SampledLane& b, const EigenlaneBasis& basis);
double coefficient_distance(std::span<const double> a, std::span<const double> b);

std::string basis_to_text(const EigenlaneBasis& basis);
EigenlaneBasis basis_from_text(const std::string& text);
void write_basis_file(const std::filesystem::path& path, const EigenlaneBasis& basis);
EigenlaneBasis read_basis_file(const std::filesystem::path& path);

}  // namespace lanecurate
