#pragma once

#include <vector>

#include "lanecurate/image.hpp"

namespace lanecurate {

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
  std::vector<double> ms_weights{0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

  void validate() const;
  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
};

/// Window-averaged SSIM and contrast-structure terms at one scale.
struct SsimTerms {
  double ssim = 0.0;
  double cs = 0.0;
};

/// Normalized 1D Gaussian taps; the 2D window is their outer product.
std::vector<double> gaussian_window(int size, double sigma);

/// Averages over every window position fully inside the image (no padding).
SsimTerms ssim_terms(const GrayImage& a, const GrayImage& b, const SsimParams& p = {});

double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p = {});

/// Contrast-structure at every scale but the coarsest, full SSIM there, 2x2
/// mean pooling between scales, negative factors clamped to 0.
double ms_ssim(const GrayImage& a, const GrayImage& b, const SsimParams& p = {});

/// One scale of an image with its window mean and mean square.
struct SsimLevel {
  GrayImage image;
  std::vector<double> mean;
  std::vector<double> mean_sq;
};

/// Per-image MS-SSIM work done once, for scoring many pairs. Scores are
/// identical to the two-image overload.
struct SsimPyramid {
  std::vector<SsimLevel> levels;
};

SsimPyramid prepare_ms_ssim(const GrayImage& img, const SsimParams& p = {});
double ms_ssim(const SsimPyramid& a, const SsimPyramid& b, const SsimParams& p = {});

}  // namespace lanecurate
