#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ils/image.hpp"

namespace testutil {

inline ils::ImagePlane random_plane(int h, int w, std::mt19937_64& rng, double lo = 0.0,
                                    double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  ils::ImagePlane p(h, w);
  for (double& v : p.values()) v = dist(rng);
  return p;
}

inline ils::MultiImage random_rgb(int h, int w, std::mt19937_64& rng) {
  std::vector<ils::ImagePlane> ch;
  for (int k = 0; k < 3; ++k) ch.push_back(random_plane(h, w, rng));
  return ils::MultiImage(std::move(ch), ils::ColorSpace::RGB);
}

// ((a r + b c + k r c) mod m), the integer pattern shared with tests/oracles/gen_oracles.py.
inline ils::ImagePlane pattern(int h, int w, int a, int b, int m, int k, double scale,
                               double shift) {
  ils::ImagePlane p(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) p(r, c) = ((a * r + b * c + k * r * c) % m - shift) * scale;
  }
  return p;
}

inline double max_abs_diff(const ils::ImagePlane& a, const ils::ImagePlane& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double max_abs_diff(const ils::ImagePlane& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b[i]));
  return m;
}

inline double max_abs_diff(const ils::MultiImage& a, const ils::MultiImage& b) {
  double m = 0.0;
  for (int k = 0; k < a.channel_count(); ++k) m = std::max(m, max_abs_diff(a.channel(k), b.channel(k)));
  return m;
}

inline std::filesystem::path data_dir() { return ILS_TEST_DATA_DIR; }

inline std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "ils_unit_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace testutil
