#include <doctest.h>

#include <cmath>

#include "lanecurate/error.hpp"
#include "lanecurate/mask_similarity.hpp"
#include "test_support.hpp"

using namespace lanecurate;
using lanecurate::testing::lane_from;
using lanecurate::testing::Rng;

namespace {

// Full-rank basis over R^2 (identity up to the sign convention).
EigenlaneBasis full_basis_2d() {
  LanePool pool(2);
  pool.add(std::vector<double>{1, 0});
  pool.add(std::vector<double>{0, 1});
  return fit_basis(pool, 2);
}

EigenlaneBasis random_basis(Rng& rng, std::size_t p, std::size_t r) {
  LanePool pool(p);
  for (std::size_t i = 0; i < p + 5; ++i) pool.add(testing::random_lane(rng, p).xs);
  return fit_basis(pool, r);
}

LaneMask mask_of(std::initializer_list<std::vector<double>> lanes) {
  LaneMask m;
  for (const auto& l : lanes) m.lanes.push_back(lane_from(l));
  return m;
}

// Oracle: literal sum-of-mins with raw Euclidean distance (valid at full rank).
double brute_directed(const LaneMask& src, const LaneMask& ref) {
  double total = 0.0;
  for (const auto& r : ref.lanes) {
    double best = 1e300;
    for (const auto& s : src.lanes) {
      double d = 0.0;
      for (std::size_t i = 0; i < r.xs.size(); ++i) d += (r.xs[i] - s.xs[i]) * (r.xs[i] - s.xs[i]);
      best = std::min(best, std::sqrt(d));
    }
    total += best;
  }
  return total;
}

}  // namespace

TEST_CASE("directed cost examples") {
  const auto basis = full_basis_2d();
  const auto m = mask_of({{0, 0}, {10, 10}});
  CHECK(directed_cost(m, m, basis) == 0.0);
  CHECK(directed_cost(m, mask_of({{1, 1}}), basis) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(directed_cost(mask_of({{0, 0}}), mask_of({{1, 1}, {2, 2}}), basis) ==
        doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(directed_cost(LaneMask{}, mask_of({{1, 1}}), basis), UndefinedMatchingError);
}

TEST_CASE("directed cost matches the brute-force oracle at full rank") {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const std::size_t p = 2 + rng.index(8);
    const auto basis = random_basis(rng, p, p);
    auto a = testing::random_mask(rng, p);
    auto b = testing::random_mask(rng, p);
    if (a.empty() || b.empty()) continue;
    const double expect = brute_directed(a, b);
    CHECK(std::abs(directed_cost(a, b, basis) - expect) <= 1e-9 * expect);
  }
}

TEST_CASE("mask similarity examples") {
  const auto basis = full_basis_2d();
  const auto mi = mask_of({{0, 0}, {10, 10}});
  const auto mj = mask_of({{1, 1}});
  CHECK(mask_similarity(mi, mi, basis, {5.0}) == 0.0);
  CHECK(mask_similarity(mi, mj, basis, {5.0}) == doctest::Approx(std::sqrt(2.0) + 5.0).epsilon(1e-12));
  CHECK(mask_similarity(mj, mi, basis, {5.0}) == mask_similarity(mi, mj, basis, {5.0}));

  // Mj plus k copies of its own lanes costs exactly k * kappa.
  const auto base = mask_of({{3, 4}, {7, 1}});
  auto padded = base;
  padded.lanes.push_back(base.lanes[0]);
  padded.lanes.push_back(base.lanes[1]);
  padded.lanes.push_back(base.lanes[0]);
  CHECK(mask_similarity(padded, base, basis, {2.5}) == 3 * 2.5);
}

TEST_CASE("empty masks") {
  const auto basis = full_basis_2d();
  CHECK(mask_similarity(LaneMask{}, LaneMask{}, basis, {4.0}) == 0.0);
  CHECK(mask_similarity(LaneMask{}, mask_of({{1, 2}, {3, 4}}), basis, {4.0}) == 8.0);
  CHECK(mask_similarity(mask_of({{1, 2}}), LaneMask{}, basis, {4.0}) == 4.0);
}

TEST_CASE("equal lane counts average both directions") {
  const auto basis = full_basis_2d();
  const auto a = mask_of({{0, 0}, {0, 1}});
  const auto b = mask_of({{0, 10}, {0, 20}});
  const double ab = directed_cost(a, b, basis);
  const double ba = directed_cost(b, a, basis);
  CHECK(ab != ba);
  CHECK(mask_similarity(a, b, basis, {1.0}) == doctest::Approx((ab + ba) / 2.0));
}

TEST_CASE("kappa must be finite and non-negative") {
  const auto basis = full_basis_2d();
  const auto a = mask_of({{0, 0}});
  CHECK_THROWS_AS(mask_similarity(a, a, basis, {-1.0}), ParameterError);
  CHECK_THROWS_AS(mask_similarity(a, a, basis, {INFINITY}), ParameterError);
}

TEST_CASE("symmetry, identity and non-negativity on random masks") {
  Rng rng(32);
  for (int t = 0; t < 300; ++t) {
    const std::size_t p = 4 + rng.index(20);
    const auto basis = random_basis(rng, p, 1 + rng.index(p));
    const auto a = testing::random_mask(rng, p);
    const auto b = testing::random_mask(rng, p);
    const MaskSimilarityConfig cfg{rng.uniform(0, 500)};
    const double ab = mask_similarity(a, b, basis, cfg);
    CHECK(ab == mask_similarity(b, a, basis, cfg));
    CHECK(ab >= 0.0);
    CHECK(mask_similarity(a, a, basis, cfg) == 0.0);
  }
}

TEST_CASE("appending duplicate lanes to the larger mask adds exactly kappa each") {
  Rng rng(33);
  for (int t = 0; t < 200; ++t) {
    const std::size_t p = 4 + rng.index(10);
    const auto basis = random_basis(rng, p, 1 + rng.index(p));
    LaneMask big;
    LaneMask small;
    const std::size_t n = rng.index(3);
    for (std::size_t i = 0; i < n + 1 + rng.index(2); ++i) big.lanes.push_back(testing::random_lane(rng, p));
    for (std::size_t i = 0; i < n; ++i) small.lanes.push_back(testing::random_lane(rng, p));
    const MaskSimilarityConfig cfg{rng.uniform(0, 100)};
    const double before = mask_similarity(big, small, basis, cfg);
    const std::size_t j = 1 + rng.index(3);
    for (std::size_t k = 0; k < j; ++k) big.lanes.push_back(big.lanes[rng.index(big.size())]);
    const double after = mask_similarity(big, small, basis, cfg);
    CHECK(std::abs(after - before - static_cast<double>(j) * cfg.kappa) <= 1e-12 * std::max(1.0, after));
  }
}

TEST_CASE("non-decreasing in kappa, strictly when counts differ") {
  Rng rng(34);
  for (int t = 0; t < 100; ++t) {
    const std::size_t p = 6;
    const auto basis = random_basis(rng, p, 3);
    const auto a = testing::random_mask(rng, p);
    const auto b = testing::random_mask(rng, p);
    const double k1 = rng.uniform(0, 50);
    const double k2 = k1 + rng.uniform(0.1, 50);
    const double f1 = mask_similarity(a, b, basis, {k1});
    const double f2 = mask_similarity(a, b, basis, {k2});
    if (a.size() != b.size()) {
      CHECK(f2 > f1);
    } else {
      CHECK(f2 == f1);
    }
  }
}

TEST_CASE("default kappa is the mean pairwise lane distance") {
  Rng rng(35);
  const std::size_t p = 5;
  LanePool pool(p);
  for (int i = 0; i < 12; ++i) pool.add(testing::random_lane(rng, p).xs);
  const auto basis = fit_basis(pool, 2);
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      sum += lane_distance(lane_from(pool.column(i)), lane_from(pool.column(j)), basis);
      ++pairs;
    }
  }
  CHECK(default_kappa(pool, basis) == doctest::Approx(sum / pairs).epsilon(1e-12));
  LanePool one(p);
  one.add(pool.column(0));
  CHECK(default_kappa(one, basis) == 0.0);
}
