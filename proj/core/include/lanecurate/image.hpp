#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace lanecurate {

/// Row-major luma image with values in [0, 1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0);

  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

  /// Throws ParameterError on a size mismatch or values outside [0, 1].
  void validate() const;
  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Interleaved RGB, row-major, values in [0, 1].
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0.0) {}
};

/// Rec. 601 luma: 0.299 R + 0.587 G + 0.114 B.
GrayImage to_gray(const RgbImage& rgb);

/// 2x2 mean pooling; an odd last row or column is dropped.
GrayImage downsample_2x2(const GrayImage& img);

/// Halves with 2x2 pooling while the image is at least twice the target in
/// both directions, then area-averages to exactly width x height.
GrayImage resize_for_scoring(const GrayImage& img, int width, int height);

// Binary PNM (P5 gray, P6 color), 8 bits per sample.
struct PnmImage {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 for P5, 3 for P6
  std::vector<double> samples;  // scaled by 1 / maxval
};

PnmImage read_pnm(const std::filesystem::path& path);
PnmImage decode_pnm(const std::string& bytes, const std::string& name = "<memory>");

/// Reads a P5 or P6 file and converts to luma.
GrayImage load_gray(const std::filesystem::path& path);

std::string encode_pgm(const GrayImage& img);
std::string encode_ppm(const RgbImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace lanecurate
