#include "lanecurate/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "file_util.hpp"
#include "lanecurate/error.hpp"

namespace lanecurate {

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0), fill) {}

void GrayImage::validate() const {
  if (width < 1 || height < 1) throw ParameterError("image must be at least 1x1");
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw ParameterError("image pixel count does not match its size");
  }
  for (double v : pixels) {
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("image value outside [0, 1]");
  }
}

GrayImage to_gray(const RgbImage& rgb) {
  GrayImage out(rgb.width, rgb.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const double r = rgb.pixels[3 * i];
    const double g = rgb.pixels[3 * i + 1];
    const double b = rgb.pixels[3 * i + 2];
    out.pixels[i] = std::clamp(0.299 * r + 0.587 * g + 0.114 * b, 0.0, 1.0);
  }
  return out;
}

GrayImage downsample_2x2(const GrayImage& img) {
  GrayImage out(img.width / 2, img.height / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      out.at(x, y) = (img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) + img.at(2 * x, 2 * y + 1) +
                      img.at(2 * x + 1, 2 * y + 1)) /
                     4.0;
    }
  }
  return out;
}

namespace {

struct Tap {
  int index;
  double weight;
};

// Box-filter taps mapping n_in samples onto n_out samples.
std::vector<std::vector<Tap>> area_taps(int n_in, int n_out) {
  std::vector<std::vector<Tap>> taps(n_out);
  const double scale = static_cast<double>(n_in) / n_out;
  for (int o = 0; o < n_out; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    for (int i = static_cast<int>(std::floor(lo)); i < n_in && i < hi; ++i) {
      const double overlap = std::min(hi, i + 1.0) - std::max(lo, static_cast<double>(i));
      if (overlap > 0.0) taps[o].push_back({i, overlap / scale});
    }
  }
  return taps;
}

}  // namespace

GrayImage resize_for_scoring(const GrayImage& img, int width, int height) {
  if (width < 1 || height < 1) throw ParameterError("scoring size must be positive");
  GrayImage cur = img;
  while (cur.width >= 2 * width && cur.height >= 2 * height) cur = downsample_2x2(cur);
  if (cur.width == width && cur.height == height) return cur;

  const auto tx = area_taps(cur.width, width);
  const auto ty = area_taps(cur.height, height);
  GrayImage horiz(width, cur.height);
  for (int y = 0; y < cur.height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (const Tap& t : tx[x]) acc += t.weight * cur.at(t.index, y);
      horiz.at(x, y) = acc;
    }
  }
  GrayImage out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (const Tap& t : ty[y]) acc += t.weight * horiz.at(x, t.index);
      out.at(x, y) = std::clamp(acc, 0.0, 1.0);
    }
  }
  return out;
}

PnmImage decode_pnm(const std::string& bytes, const std::string& name) {
  std::size_t pos = 0;
  auto fail = [&name](const std::string& what) -> ParseError {
    return ParseError(name + ": " + what);
  };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char* what) {
    skip_space();
    long value = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000) throw fail(std::string(what) + " too large");
      ++pos;
    }
    if (pos == start) throw fail(std::string("missing ") + what);
    return static_cast<int>(value);
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw fail("not a binary PGM/PPM file");
  }
  PnmImage img;
  img.channels = bytes[1] == '5' ? 1 : 3;
  pos = 2;
  img.width = read_int("width");
  img.height = read_int("height");
  const int maxval = read_int("maxval");
  if (img.width < 1 || img.height < 1) throw fail("empty image");
  if (maxval < 1 || maxval > 255) throw fail("only 8-bit samples are supported");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw fail("malformed header");
  }
  ++pos;
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height * img.channels;
  if (bytes.size() - pos < count) throw fail("truncated pixel data");
  img.samples.resize(count);
  const double scale = 1.0 / maxval;
  for (std::size_t i = 0; i < count; ++i) {
    const auto raw = static_cast<unsigned char>(bytes[pos + i]);
    img.samples[i] = std::min(1.0, raw * scale);
  }
  return img;
}

PnmImage read_pnm(const std::filesystem::path& path) {
  return decode_pnm(detail::read_file(path), path.string());
}

GrayImage load_gray(const std::filesystem::path& path) {
  PnmImage pnm = read_pnm(path);
  if (pnm.channels == 1) {
    GrayImage g(pnm.width, pnm.height);
    g.pixels = std::move(pnm.samples);
    return g;
  }
  RgbImage rgb(pnm.width, pnm.height);
  rgb.pixels = std::move(pnm.samples);
  return to_gray(rgb);
}

namespace {

char quantize(double v) {
  const long q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
  return static_cast<char>(static_cast<unsigned char>(q));
}

}  // namespace

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size());
  for (double v : img.pixels) out.push_back(quantize(v));
  return out;
}

std::string encode_ppm(const RgbImage& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size());
  for (double v : img.pixels) out.push_back(quantize(v));
  return out;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  detail::write_file(path, encode_pgm(img));
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  detail::write_file(path, encode_ppm(img));
}

}  // namespace lanecurate
