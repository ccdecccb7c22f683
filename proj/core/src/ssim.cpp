#include "lanecurate/ssim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lanecurate/error.hpp"

namespace lanecurate {

void SsimParams::validate() const {
  if (window < 3 || window % 2 == 0) throw ParameterError("SSIM window must be odd and >= 3");
  if (!(sigma > 0.0)) throw ParameterError("SSIM sigma must be positive");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw ParameterError("SSIM constants must be positive");
  if (!(dynamic_range > 0.0)) throw ParameterError("SSIM dynamic range must be positive");
  if (ms_weights.empty()) throw ParameterError("MS-SSIM needs at least one scale");
  // The published weights add up to 1.0001, so no sum constraint.
  for (double w : ms_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("MS-SSIM weights must be non-negative");
  }
}

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size));
  const int half = size / 2;
  for (int i = 0; i < size; ++i) {
    const double d = i - half;
    w[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

namespace {

// Valid-mode separable filtering: output is (W - k + 1) x (H - k + 1).
std::vector<double> filter_valid(const std::vector<double>& src, int width, int height,
                                 const std::vector<double>& taps) {
  const int k = static_cast<int>(taps.size());
  const int ow = width - k + 1;
  const int oh = height - k + 1;
  // Taps outermost so the inner loops vectorize; each output still sums its
  // taps in order 0..k-1.
  std::vector<double> horiz(static_cast<std::size_t>(ow) * height, 0.0);
  for (int y = 0; y < height; ++y) {
    const double* row = &src[static_cast<std::size_t>(y) * width];
    double* dst = &horiz[static_cast<std::size_t>(y) * ow];
    for (int t = 0; t < k; ++t) {
      const double tap = taps[t];
      for (int x = 0; x < ow; ++x) dst[x] += tap * row[x + t];
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh, 0.0);
  for (int y = 0; y < oh; ++y) {
    double* dst = &out[static_cast<std::size_t>(y) * ow];
    for (int t = 0; t < k; ++t) {
      const double tap = taps[t];
      const double* row = &horiz[static_cast<std::size_t>(y + t) * ow];
      for (int x = 0; x < ow; ++x) dst[x] += tap * row[x];
    }
  }
  return out;
}

void check_pair(const GrayImage& a, const GrayImage& b, int min_side) {
  if (a.width != b.width || a.height != b.height) {
    throw ParameterError("images differ in size: " + std::to_string(a.width) + "x" +
                         std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                         std::to_string(b.height));
  }
  if (a.pixels.size() != static_cast<std::size_t>(a.width) * a.height ||
      b.pixels.size() != a.pixels.size()) {
    throw ParameterError("image pixel count does not match its size");
  }
  if (std::min(a.width, a.height) < min_side) {
    throw ParameterError("image " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                         " is smaller than the required " + std::to_string(min_side) + " pixels");
  }
}

SsimLevel make_level(GrayImage img, const std::vector<double>& taps) {
  SsimLevel level;
  const int w = img.width;
  const int h = img.height;
  std::vector<double> sq(img.pixels.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = img.pixels[i] * img.pixels[i];
  level.mean = filter_valid(img.pixels, w, h, taps);
  level.mean_sq = filter_valid(sq, w, h, taps);
  level.image = std::move(img);
  return level;
}

SsimTerms level_terms(const SsimLevel& a, const SsimLevel& b, const SsimParams& p,
                      const std::vector<double>& taps) {
  const std::size_t n = a.image.pixels.size();
  std::vector<double> ab(n);
  for (std::size_t i = 0; i < n; ++i) ab[i] = a.image.pixels[i] * b.image.pixels[i];
  const auto e_ab = filter_valid(ab, a.image.width, a.image.height, taps);

  const double c1 = p.c1();
  const double c2 = p.c2();
  double sum_ssim = 0.0;
  double sum_cs = 0.0;
  for (std::size_t i = 0; i < e_ab.size(); ++i) {
    const double ma = a.mean[i];
    const double mb = b.mean[i];
    const double var_a = a.mean_sq[i] - ma * ma;
    const double var_b = b.mean_sq[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double cs = (2.0 * cov + c2) / (var_a + var_b + c2);
    const double lum = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    sum_cs += cs;
    sum_ssim += lum * cs;
  }
  const auto count = static_cast<double>(e_ab.size());
  return {sum_ssim / count, sum_cs / count};
}

}  // namespace

SsimTerms ssim_terms(const GrayImage& a, const GrayImage& b, const SsimParams& p) {
  p.validate();
  check_pair(a, b, p.window);
  const auto taps = gaussian_window(p.window, p.sigma);
  return level_terms(make_level(a, taps), make_level(b, taps), p, taps);
}

double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p) {
  return ssim_terms(a, b, p).ssim;
}

SsimPyramid prepare_ms_ssim(const GrayImage& img, const SsimParams& p) {
  p.validate();
  const std::size_t scales = p.ms_weights.size();
  check_pair(img, img, p.window << (scales - 1));
  const auto taps = gaussian_window(p.window, p.sigma);
  SsimPyramid pyr;
  GrayImage cur = img;
  for (std::size_t j = 0; j < scales; ++j) {
    GrayImage next = j + 1 < scales ? downsample_2x2(cur) : GrayImage{};
    pyr.levels.push_back(make_level(std::move(cur), taps));
    cur = std::move(next);
  }
  return pyr;
}

double ms_ssim(const SsimPyramid& a, const SsimPyramid& b, const SsimParams& p) {
  p.validate();
  const std::size_t scales = p.ms_weights.size();
  if (a.levels.size() != scales || b.levels.size() != scales) {
    throw ParameterError("pyramid depth does not match the MS-SSIM weights");
  }
  const auto& base_a = a.levels[0].image;
  const auto& base_b = b.levels[0].image;
  check_pair(base_a, base_b, p.window << (scales - 1));
  const auto taps = gaussian_window(p.window, p.sigma);
  double result = 1.0;
  for (std::size_t j = 0; j < scales; ++j) {
    const SsimTerms t = level_terms(a.levels[j], b.levels[j], p, taps);
    const double factor = j + 1 < scales ? t.cs : t.ssim;
    result *= std::pow(std::max(factor, 0.0), p.ms_weights[j]);
  }
  return result;
}

double ms_ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p) {
  p.validate();
  check_pair(a, b, p.window << (p.ms_weights.size() - 1));
  return ms_ssim(prepare_ms_ssim(a, p), prepare_ms_ssim(b, p), p);
}

}  // namespace lanecurate
