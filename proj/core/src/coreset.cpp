#include "lanecurate/coreset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "lanecurate/error.hpp"

namespace lanecurate {

SimilarityGraph::SimilarityGraph(std::size_t n, std::vector<double> weights,
                                 std::vector<std::string> labels)
    : n_(n), weights_(std::move(weights)), labels_(std::move(labels)) {
  if (weights_.size() != condensed_size(n_)) {
    throw ParameterError("graph on " + std::to_string(n_) + " vertices needs " +
                         std::to_string(condensed_size(n_)) + " weights, got " +
                         std::to_string(weights_.size()));
  }
  if (labels_.empty()) {
    labels_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != n_) throw ParameterError("graph label count does not match vertex count");
  for (std::size_t i = 0, idx = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j, ++idx) {
      const double w = weights_[idx];
      if (!std::isfinite(w) || w < 0.0) {
        throw DataError("weight of pair (" + labels_[i] + ", " + labels_[j] +
                        ") is not a finite non-negative number");
      }
    }
  }
}

std::size_t SimilarityGraph::condensed_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

double SimilarityGraph::weight(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  return weights_[condensed_index(n_, i, j)];
}

SimilarityGraph SimilarityGraph::transformed(const std::function<double(double)>& f) const {
  std::vector<double> w(weights_.size());
  std::transform(weights_.begin(), weights_.end(), w.begin(), f);
  return SimilarityGraph(n_, std::move(w), labels_);
}

SimilarityGraph build_graph(std::size_t n, const PairFunction& similarity,
                            std::vector<std::string> labels, unsigned threads) {
  if (n < 2) throw ParameterError("a similarity graph needs at least 2 items");
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw ParameterError("label count does not match item count");

  std::vector<double> weights(SimilarityGraph::condensed_size(n));
  // Lowest failing row wins so the reported error is scheduling-independent.
  std::vector<std::exception_ptr> row_errors(n);
  std::atomic<std::size_t> next_row{0};
  auto worker = [&] {
    for (std::size_t i = next_row++; i < n; i = next_row++) {
      try {
        std::size_t idx = SimilarityGraph::condensed_index(n, i, i + 1);
        for (std::size_t j = i + 1; j < n; ++j, ++idx) weights[idx] = similarity(i, j);
      } catch (...) {
        row_errors[i] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n - 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : row_errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t i = 0, idx = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      if (!std::isfinite(weights[idx])) {
        throw DataError("similarity of pair (" + labels[i] + ", " + labels[j] + ") is not finite");
      }
    }
  }
  return SimilarityGraph(n, std::move(weights), std::move(labels));
}

const char* to_string(SelectionPolicy policy) {
  return policy == SelectionPolicy::kToSelected ? "to-selected" : "to-unselected";
}

SelectionPolicy parse_policy(const std::string& text) {
  if (text == "to-selected") return SelectionPolicy::kToSelected;
  if (text == "to-unselected") return SelectionPolicy::kToUnselected;
  throw ParameterError("unknown selection policy '" + text + "'");
}

double objective(const SimilarityGraph& g, std::span<const std::size_t> subset) {
  std::vector<bool> seen(g.size(), false);
  for (std::size_t v : subset) {
    if (v >= g.size()) throw ParameterError("vertex " + std::to_string(v) + " out of range");
    if (seen[v]) throw ParameterError("vertex " + std::to_string(v) + " repeated");
    seen[v] = true;
  }
  // Index order, so the same set always sums to the same value.
  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = a + 1; b < sorted.size(); ++b) total += g.weight(sorted[a], sorted[b]);
  }
  return total;
}

SelectionResult greedy_select(const SimilarityGraph& g, std::size_t k, SelectionPolicy policy) {
  const std::size_t n = g.size();
  if (k < 2 || k > n) {
    throw ParameterError("K=" + std::to_string(k) + " outside [2, " + std::to_string(n) + "]");
  }

  std::size_t seed_i = 0;
  std::size_t seed_j = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, idx = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      if (g.weights()[idx] < best) {
        best = g.weights()[idx];
        seed_i = i;
        seed_j = j;
      }
    }
  }

  std::vector<bool> chosen(n, false);
  std::vector<double> to_selected(n, 0.0);

  SelectionResult result;
  result.policy = to_string(policy);
  auto add = [&](std::size_t v) {
    chosen[v] = true;
    result.selected.push_back(v);
    for (std::size_t c = 0; c < n; ++c) {
      if (!chosen[c]) to_selected[c] += g.weight(c, v);
    }
  };
  // Summed directly rather than as row sum minus to_selected: the last two
  // candidates then tie exactly and the lower index wins.
  auto to_unselected = [&](std::size_t c) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l != c && !chosen[l]) acc += g.weight(c, l);
    }
    return acc;
  };
  add(seed_i);
  add(seed_j);

  while (result.selected.size() < k) {
    std::size_t pick = n;
    double pick_score = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
      if (chosen[c]) continue;
      const double score =
          policy == SelectionPolicy::kToSelected ? to_selected[c] : to_unselected(c);
      if (pick == n || score < pick_score) {
        pick = c;
        pick_score = score;
      }
    }
    add(pick);
  }
  result.objective = objective(g, result.selected);
  return result;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

SelectionResult exhaustive_select(const SimilarityGraph& g, std::size_t k) {
  const std::size_t n = g.size();
  if (k < 1 || k > n) {
    throw ParameterError("K=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  if (binomial(n, k) > kMaxExhaustiveSubsets) {
    throw CapacityError("C(" + std::to_string(n) + ", " + std::to_string(k) +
                        ") subsets exceed the exhaustive search limit");
  }

  std::vector<std::size_t> current;
  std::vector<std::size_t> best_set;
  double best = std::numeric_limits<double>::infinity();
  current.reserve(k);

  // Lexicographic DFS; a strict improvement is required to replace the best.
  auto dfs = [&](auto&& self, std::size_t start, double partial) -> void {
    if (current.size() == k) {
      if (partial < best) {
        best = partial;
        best_set = current;
      }
      return;
    }
    const std::size_t remaining = k - current.size();
    for (std::size_t v = start; v + remaining <= n; ++v) {
      double add = 0.0;
      for (std::size_t u : current) add += g.weight(u, v);
      current.push_back(v);
      self(self, v + 1, partial + add);
      current.pop_back();
    }
  };
  dfs(dfs, 0, 0.0);

  SelectionResult result;
  result.selected = std::move(best_set);
  result.objective = objective(g, result.selected);
  result.policy = "exhaustive";
  return result;
}

}  // namespace lanecurate
