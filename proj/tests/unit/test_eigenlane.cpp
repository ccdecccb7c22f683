#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "lanecurate/eigenlane.hpp"
#include "lanecurate/error.hpp"
#include "test_support.hpp"

using namespace lanecurate;
using lanecurate::testing::lane_from;
using lanecurate::testing::Rng;

namespace {

LanePool hand_pool() {
  // A = [[1,2,1],[1,2,-1]]: three lanes of two samples.
  LanePool pool(2);
  pool.add(std::vector<double>{1, 1});
  pool.add(std::vector<double>{2, 2});
  pool.add(std::vector<double>{1, -1});
  return pool;
}

LanePool random_pool(Rng& rng, std::size_t p, std::size_t l, double scale = 1.0) {
  LanePool pool(p);
  for (std::size_t i = 0; i < l; ++i) {
    std::vector<double> xs(p);
    for (double& x : xs) x = scale * rng.uniform(-1, 1);
    pool.add(xs);
  }
  return pool;
}

// Oracle: singular values from the symmetric eigenproblem of A A^T.
std::vector<double> oracle_singular_values(const LanePool& pool) {
  const std::size_t p = pool.samples();
  Eigen::MatrixXd a(p, pool.size());
  for (std::size_t l = 0; l < pool.size(); ++l)
    for (std::size_t i = 0; i < p; ++i) a(i, l) = pool.column(l)[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a * a.transpose());
  std::vector<double> s;
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  }
  s.resize(std::min(p, pool.size()));
  return s;
}

double reconstruction_residual(const LanePool& pool, const EigenlaneBasis& b) {
  double total = 0.0;
  for (const auto& col : pool.columns()) {
    const auto rec = b.reconstruct(b.embed(col));
    for (std::size_t i = 0; i < col.size(); ++i) total += (col[i] - rec[i]) * (col[i] - rec[i]);
  }
  return total;
}

}  // namespace

TEST_CASE("hand-computed 2x3 lane matrix") {
  const auto basis = fit_basis(hand_pool(), 2);
  REQUIRE(basis.sigma().size() == 2);
  CHECK(std::abs(basis.sigma()[0] - std::sqrt(10.0)) < 1e-12);
  CHECK(std::abs(basis.sigma()[1] - std::sqrt(2.0)) < 1e-12);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(basis.u(0, 0) - r) < 1e-12);
  CHECK(std::abs(basis.u(1, 0) - r) < 1e-12);
  CHECK(std::abs(basis.u(0, 1) - r) < 1e-12);
  CHECK(std::abs(basis.u(1, 1) + r) < 1e-12);
}

TEST_CASE("single-lane pool gives the normalized column") {
  LanePool pool(2);
  pool.add(std::vector<double>{3, 4});
  const auto basis = fit_basis(pool);
  REQUIRE(basis.sigma().size() == 1);
  CHECK(basis.sigma()[0] == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(basis.u(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(basis.u(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("identical lanes have exactly one nonzero singular value") {
  LanePool pool(5);
  for (int i = 0; i < 6; ++i) pool.add(std::vector<double>{1, 2, 3, 4, 5});
  const auto basis = fit_basis(pool);
  CHECK(basis.rank() == 1);
  REQUIRE(basis.sigma().size() == 5);
  CHECK(basis.sigma()[0] > 1.0);
  for (std::size_t j = 1; j < 5; ++j) CHECK(basis.sigma()[j] < 1e-9);
}

TEST_CASE("embed and reconstruct on the hand basis") {
  const auto basis = fit_basis(hand_pool(), 1);
  const auto c1 = embed_lane(lane_from({1, 1}), basis);
  REQUIRE(c1.size() == 1);
  CHECK(std::abs(c1[0] - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(embed_lane(lane_from({1, -1}), basis)[0]) < 1e-12);
  CHECK(embed_lane(lane_from({0, 0}), basis)[0] == 0.0);

  const std::vector<double> c{std::sqrt(2.0)};
  const auto rec = reconstruct_lane(c, basis);
  CHECK(rec[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec[1] == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> zero{0.0};
  CHECK(reconstruct_lane(zero, basis) == std::vector<double>{0.0, 0.0});

  CHECK(lane_distance(lane_from({1, 1}), lane_from({1, -1}), basis) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("dimension and rank errors") {
  const auto basis = fit_basis(hand_pool(), 1);
  CHECK_THROWS_AS(embed_lane(lane_from({1, 2, 3}), basis), ParameterError);
  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(reconstruct_lane(two, basis), ParameterError);
  CHECK_THROWS_AS(fit_basis(hand_pool(), 3), ParameterError);
  CHECK_THROWS_AS(fit_basis(hand_pool(), 0), ParameterError);
  CHECK_THROWS_AS(fit_basis(LanePool(2)), ParameterError);
  LanePool pool(2);
  CHECK_THROWS_AS(pool.add(std::vector<double>{1, 2, 3}), ParameterError);
}

TEST_CASE("singular values match the eigen-decomposition oracle") {
  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    const std::size_t p = 2 + rng.index(10);
    const std::size_t l = 1 + rng.index(14);
    const auto pool = random_pool(rng, p, l, 100.0);
    const auto basis = fit_basis(pool, std::min(p, l));
    const auto expect = oracle_singular_values(pool);
    REQUIRE(basis.sigma().size() == expect.size());
    for (std::size_t j = 0; j < expect.size(); ++j) {
      CHECK(std::abs(basis.sigma()[j] - expect[j]) <= 1e-9 * std::max(expect[j], 1e-3 * expect[0]));
    }
  }
}

TEST_CASE("basis columns are orthonormal and sign-normalized") {
  Rng rng(22);
  for (int t = 0; t < 30; ++t) {
    const std::size_t p = 2 + rng.index(20);
    const auto pool = random_pool(rng, p, 1 + rng.index(40), 300.0);
    const auto basis = fit_basis(pool, std::min(p, pool.size()));
    for (std::size_t a = 0; a < basis.rank(); ++a) {
      for (std::size_t b = 0; b < basis.rank(); ++b) {
        double dot = 0.0;
        for (std::size_t i = 0; i < p; ++i) dot += basis.u(i, a) * basis.u(i, b);
        CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-9);
      }
      for (std::size_t i = 0; i < p; ++i) {
        if (std::abs(basis.u(i, a)) > 1e-12) {
          CHECK(basis.u(i, a) > 0.0);
          break;
        }
      }
    }
    for (std::size_t j = 1; j < basis.sigma().size(); ++j) {
      CHECK(basis.sigma()[j - 1] >= basis.sigma()[j]);
    }
  }
}

TEST_CASE("reconstruction residual equals the discarded energy") {
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    const std::size_t p = 3 + rng.index(12);
    const auto pool = random_pool(rng, p, p + rng.index(20), 50.0);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r <= p; ++r) {
      const auto basis = fit_basis(pool, r);
      const double residual = reconstruction_residual(pool, basis);
      double tail = 0.0;
      for (std::size_t j = r; j < basis.sigma().size(); ++j) tail += basis.sigma()[j] * basis.sigma()[j];
      double total = 0.0;
      for (double s : basis.sigma()) total += s * s;
      CHECK(std::abs(residual - tail) <= 1e-6 * std::max(tail, 1e-12 * total));
      CHECK(residual <= prev + 1e-9 * total);
      prev = residual;
    }
  }
}

TEST_CASE("automatic rank keeps 99% of the energy") {
  Rng rng(24);
  // Rank-2 structure plus small noise.
  LanePool pool(10);
  for (int i = 0; i < 30; ++i) {
    const double a = rng.uniform(-100, 100);
    const double b = rng.uniform(-20, 20);
    std::vector<double> xs(10);
    for (std::size_t k = 0; k < 10; ++k) xs[k] = a + b * static_cast<double>(k) + rng.uniform(-0.01, 0.01);
    pool.add(xs);
  }
  const auto basis = fit_basis(pool);
  CHECK(basis.rank() <= 2);
  CHECK(basis.energy_captured() >= kAutoRankEnergy);
  if (basis.rank() > 1) {
    const auto smaller = fit_basis(pool, basis.rank() - 1);
    CHECK(smaller.energy_captured() < kAutoRankEnergy);
  }
}

TEST_CASE("lane distance is a metric and matches raw distance at full rank") {
  Rng rng(25);
  for (int t = 0; t < 20; ++t) {
    const std::size_t p = 2 + rng.index(16);
    const auto pool = random_pool(rng, p, p + rng.index(10), 200.0);
    const auto full = fit_basis(pool, p);
    const auto low = fit_basis(pool, 1 + rng.index(p));
    for (int k = 0; k < 20; ++k) {
      const auto a = testing::random_lane(rng, p);
      const auto b = testing::random_lane(rng, p);
      const auto c = testing::random_lane(rng, p);
      double raw = 0.0;
      for (std::size_t i = 0; i < p; ++i) raw += (a.xs[i] - b.xs[i]) * (a.xs[i] - b.xs[i]);
      raw = std::sqrt(raw);
      CHECK(std::abs(lane_distance(a, b, full) - raw) <= 1e-9 * raw);
      CHECK(lane_distance(a, b, low) == lane_distance(b, a, low));
      CHECK(lane_distance(a, a, low) == 0.0);
      CHECK(lane_distance(a, c, low) <= lane_distance(a, b, low) + lane_distance(b, c, low) + 1e-9);
    }
  }
  const auto basis = fit_basis(hand_pool(), 2);
  CHECK(lane_distance(lane_from({0, 0}), lane_from({3, 4}), basis) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("fitting is bit-reproducible and the basis file round-trips") {
  Rng rng(26);
  const auto pool = random_pool(rng, 12, 40, 500.0);
  const auto a = fit_basis(pool, 4);
  const auto b = fit_basis(pool, 4);
  CHECK(basis_to_text(a) == basis_to_text(b));

  const std::string text = basis_to_text(a);
  CHECK(text.rfind("EIGENLANE v1 12 4 12\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 12);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(basis_from_text(text) == a);

  testing::TempDir dir;
  write_basis_file(dir / "b.txt", a);
  CHECK(read_basis_file(dir / "b.txt") == a);
}

TEST_CASE("basis parser rejects malformed files") {
  CHECK_THROWS_AS(basis_from_text(""), ParseError);
  CHECK_THROWS_AS(basis_from_text("EIGENLANE v2 2 1 2\n1 1\n1\n1\n"), ParseError);
  CHECK_THROWS_AS(basis_from_text("EIGENLANE v1 2 1 2\n1\n1\n1\n"), ParseError);
  CHECK_THROWS_AS(basis_from_text("EIGENLANE v1 2 1 2\n1 1\n1\n"), ParseError);
  CHECK_THROWS_AS(basis_from_text("EIGENLANE v1 2 1 2\n1 1\nx\n1\n"), ParseError);
  CHECK_THROWS_AS(basis_from_text("EIGENLANE v1 2 3 2\n1 1\n1 1 1\n1 1 1\n"), ParseError);
}
