#include "lanecurate/eigenlane.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "file_util.hpp"
#include "lanecurate/error.hpp"
#include "lanecurate/text_format.hpp"

namespace lanecurate {

void LanePool::add(std::span<const double> xs, LaneSource source) {
  if (columns_.empty() && samples_ == 0) samples_ = xs.size();
  if (xs.size() != samples_) {
    throw ParameterError("lane has " + std::to_string(xs.size()) + " samples, pool expects " +
                         std::to_string(samples_));
  }
  columns_.emplace_back(xs.begin(), xs.end());
  sources_.push_back(std::move(source));
}

void LanePool::add_mask(const LaneMask& mask) {
  for (std::size_t i = 0; i < mask.lanes.size(); ++i) add(mask.lanes[i], {mask.scene_id, i});
}

EigenlaneBasis::EigenlaneBasis(std::size_t samples, std::size_t rank, std::vector<double> sigma,
                               std::vector<double> u)
    : samples_(samples), rank_(rank), sigma_(std::move(sigma)), u_(std::move(u)) {
  if (samples_ < 1 || rank_ < 1 || rank_ > sigma_.size() || sigma_.size() > samples_ ||
      u_.size() != samples_ * rank_) {
    throw ParameterError("inconsistent eigenlane basis shape");
  }
}

double EigenlaneBasis::energy_captured() const {
  double total = 0.0;
  double kept = 0.0;
  for (std::size_t j = 0; j < sigma_.size(); ++j) {
    total += sigma_[j] * sigma_[j];
    if (j < rank_) kept += sigma_[j] * sigma_[j];
  }
  return total > 0.0 ? kept / total : 1.0;
}

std::vector<double> EigenlaneBasis::embed(std::span<const double> xs) const {
  if (xs.size() != samples_) {
    throw ParameterError("lane has " + std::to_string(xs.size()) + " samples, basis expects " +
                         std::to_string(samples_));
  }
  std::vector<double> c(rank_, 0.0);
  for (std::size_t i = 0; i < samples_; ++i) {
    const double x = xs[i];
    const double* row = &u_[i * rank_];
    for (std::size_t j = 0; j < rank_; ++j) c[j] += row[j] * x;
  }
  return c;
}

std::vector<double> EigenlaneBasis::reconstruct(std::span<const double> coefficients) const {
  if (coefficients.size() != rank_) {
    throw ParameterError("coefficient vector has " + std::to_string(coefficients.size()) +
                         " entries, basis rank is " + std::to_string(rank_));
  }
  std::vector<double> xs(samples_, 0.0);
  for (std::size_t i = 0; i < samples_; ++i) {
    const double* row = &u_[i * rank_];
    double acc = 0.0;
    for (std::size_t j = 0; j < rank_; ++j) acc += row[j] * coefficients[j];
    xs[i] = acc;
  }
  return xs;
}

LeftSvd left_singular_vectors(const std::vector<std::vector<double>>& columns, std::size_t rows) {
  const std::size_t n_cols = columns.size();
  // Work on the transpose: P columns of length L. Right rotations that
  // orthogonalize them accumulate into the left singular vectors of A.
  std::vector<std::vector<double>> b(rows, std::vector<double>(n_cols));
  for (std::size_t l = 0; l < n_cols; ++l) {
    for (std::size_t i = 0; i < rows; ++i) b[i][l] = columns[l][i];
  }
  std::vector<std::vector<double>> v(rows, std::vector<double>(rows, 0.0));
  for (std::size_t i = 0; i < rows; ++i) v[i][i] = 1.0;

  constexpr double kTol = 1e-15;
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < rows; ++p) {
      for (std::size_t q = p + 1; q < rows; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        const auto& bp = b[p];
        const auto& bq = b[q];
        for (std::size_t k = 0; k < n_cols; ++k) {
          alpha += bp[k] * bp[k];
          beta += bq[k] * bq[k];
          gamma += bp[k] * bq[k];
        }
        if (gamma == 0.0 || std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        auto rotate = [c, s](std::vector<double>& x, std::vector<double>& y) {
          for (std::size_t k = 0; k < x.size(); ++k) {
            const double xk = x[k];
            const double yk = y[k];
            x[k] = c * xk - s * yk;
            y[k] = s * xk + c * yk;
          }
        };
        rotate(b[p], b[q]);
        rotate(v[p], v[q]);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double ss = 0.0;
    for (double x : b[i]) ss += x * x;
    norms[i] = std::sqrt(ss);
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&norms](std::size_t a, std::size_t c) { return norms[a] > norms[c]; });

  LeftSvd out;
  const std::size_t s = std::min(rows, n_cols);
  out.sigma.resize(s);
  for (std::size_t j = 0; j < s; ++j) out.sigma[j] = norms[order[j]];
  out.u.assign(rows * rows, 0.0);
  for (std::size_t j = 0; j < rows; ++j) {
    // v[order[j]] holds column j of U.
    const auto& col = v[order[j]];
    double sign = 1.0;
    for (double x : col) {
      if (std::abs(x) > 1e-12) {
        sign = x > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < rows; ++i) out.u[i * rows + j] = sign * col[i];
  }
  return out;
}

EigenlaneBasis fit_basis(const LanePool& pool, std::optional<std::size_t> rank) {
  if (pool.empty()) throw ParameterError("lane pool is empty");
  const std::size_t p = pool.samples();
  const std::size_t s = std::min(p, pool.size());
  if (rank && (*rank < 1 || *rank > s)) {
    throw ParameterError("rank " + std::to_string(*rank) + " outside [1, " + std::to_string(s) +
                         "]");
  }
  LeftSvd svd = left_singular_vectors(pool.columns(), p);

  std::size_t r = 1;
  if (rank) {
    r = *rank;
  } else {
    double total = 0.0;
    for (double x : svd.sigma) total += x * x;
    if (total > 0.0) {
      double acc = 0.0;
      r = s;
      for (std::size_t j = 0; j < s; ++j) {
        acc += svd.sigma[j] * svd.sigma[j];
        if (acc >= kAutoRankEnergy * total) {
          r = j + 1;
          break;
        }
      }
    }
  }
  std::vector<double> u(p * r);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < r; ++j) u[i * r + j] = svd.u[i * p + j];
  }
  return EigenlaneBasis(p, r, std::move(svd.sigma), std::move(u));
}

std::vector<double> embed_lane(const SampledLane& lane, const EigenlaneBasis& basis) {
  return basis.embed(lane.xs);
}

std::vector<double> reconstruct_lane(std::span<const double> coefficients,
                                     const EigenlaneBasis& basis) {
  return basis.reconstruct(coefficients);
}

double coefficient_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("coefficient vectors differ in length");
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

double lane_distance(const SampledLane& a, const SampledLane& b, const EigenlaneBasis& basis) {
  return coefficient_distance(basis.embed(a.xs), basis.embed(b.xs));
}

std::string basis_to_text(const EigenlaneBasis& basis) {
  std::string out = "EIGENLANE v1 " + std::to_string(basis.samples()) + " " +
                    std::to_string(basis.rank()) + " " + std::to_string(basis.sigma().size()) +
                    "\n";
  auto line = [&out](auto&& values) {
    bool first = true;
    for (double x : values) {
      if (!first) out += ' ';
      out += format_g17(x);
      first = false;
    }
    out += '\n';
  };
  line(basis.sigma());
  const auto& u = basis.u_row_major();
  for (std::size_t i = 0; i < basis.samples(); ++i) {
    line(std::span<const double>(u.data() + i * basis.rank(), basis.rank()));
  }
  return out;
}

namespace {

std::vector<double> parse_doubles(const std::string& line, std::size_t expected,
                                  std::size_t line_no) {
  std::vector<double> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && *p == ' ') ++p;
    if (p == end) break;
    double x = 0.0;
    auto [next, ec] = std::from_chars(p, end, x);
    if (ec != std::errc() || (next != end && *next != ' ')) {
      throw ParseError("basis file: bad number on line " + std::to_string(line_no), line_no);
    }
    out.push_back(x);
    p = next;
  }
  if (out.size() != expected) {
    throw ParseError("basis file: line " + std::to_string(line_no) + " has " +
                         std::to_string(out.size()) + " values, expected " +
                         std::to_string(expected),
                     line_no);
  }
  return out;
}

}  // namespace

EigenlaneBasis basis_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("basis file: empty", 1);
  std::istringstream header(line);
  std::string magic;
  std::string version;
  std::size_t p = 0;
  std::size_t r = 0;
  std::size_t s = 0;
  if (!(header >> magic >> version >> p >> r >> s) || magic != "EIGENLANE" || version != "v1") {
    throw ParseError("basis file: bad header", 1);
  }
  if (!std::getline(in, line)) throw ParseError("basis file: missing singular values", 2);
  auto sigma = parse_doubles(line, s, 2);
  std::vector<double> u;
  u.reserve(p * r);
  for (std::size_t i = 0; i < p; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError("basis file: missing row " + std::to_string(i), i + 3);
    }
    auto row = parse_doubles(line, r, i + 3);
    u.insert(u.end(), row.begin(), row.end());
  }
  try {
    return EigenlaneBasis(p, r, std::move(sigma), std::move(u));
  } catch (const ParameterError& e) {
    throw ParseError(std::string("basis file: ") + e.what());
  }
}

void write_basis_file(const std::filesystem::path& path, const EigenlaneBasis& basis) {
  detail::write_file(path, basis_to_text(basis));
}

EigenlaneBasis read_basis_file(const std::filesystem::path& path) {
  try {
    return basis_from_text(detail::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

}  // namespace lanecurate
