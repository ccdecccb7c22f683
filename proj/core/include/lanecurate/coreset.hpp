#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lanecurate {

/// Complete weighted graph stored as the strict upper triangle of its weight
/// matrix. Pair (i < j) lives at i*n - i*(i+1)/2 + (j - i - 1).
class SimilarityGraph {
 public:
  SimilarityGraph() = default;
  /// Throws ParameterError on a length mismatch and DataError on a negative
  /// or non-finite weight.
  SimilarityGraph(std::size_t n, std::vector<double> weights, std::vector<std::string> labels = {});

  static std::size_t condensed_size(std::size_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }
  static std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j);

  std::size_t size() const { return n_; }
  double weight(std::size_t i, std::size_t j) const;
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Applies f to every weight.
  SimilarityGraph transformed(const std::function<double(double)>& f) const;

  friend bool operator==(const SimilarityGraph&, const SimilarityGraph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> weights_;
  std::vector<std::string> labels_;
};

/// Pairwise similarity of items i and j (called with i < j).
using PairFunction = std::function<double(std::size_t, std::size_t)>;

/// Evaluates `similarity` once per unordered pair on up to `threads`
/// workers (0 = hardware concurrency). Every pair writes its own slot, so the
/// result does not depend on scheduling.
SimilarityGraph build_graph(std::size_t n, const PairFunction& similarity,
                            std::vector<std::string> labels = {}, unsigned threads = 1);

enum class SelectionPolicy {
  kToSelected,    // candidate scored against the vertices already chosen
  kToUnselected,  // candidate scored against the vertices not yet chosen
};

const char* to_string(SelectionPolicy policy);
SelectionPolicy parse_policy(const std::string& text);

struct SelectionResult {
  std::vector<std::size_t> selected;  // in selection order
  double objective = 0.0;
  std::string policy;
};

/// Sum of w(i, j) over unordered pairs in `subset`.
double objective(const SimilarityGraph& g, std::span<const std::size_t> subset);

/// Seeds with the minimum-weight pair, then adds the vertex minimizing the
/// policy's score until K vertices are chosen. Ties go to the lowest index.
SelectionResult greedy_select(const SimilarityGraph& g, std::size_t k,
                              SelectionPolicy policy = SelectionPolicy::kToSelected);

inline constexpr double kMaxExhaustiveSubsets = 1e7;

/// Minimum-objective K-subset by enumeration; ties go to the
/// lexicographically smallest subset. Throws CapacityError past 1e7 subsets.
SelectionResult exhaustive_select(const SimilarityGraph& g, std::size_t k);

double binomial(std::size_t n, std::size_t k);

}  // namespace lanecurate
