#include "ils/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ils/errors.hpp"

namespace ils {

namespace {

void check_dims(int height, int width) {
  if (height <= 0 || width <= 0) {
    throw DimensionError("image dimensions must be positive, got " + std::to_string(height) +
                         "x" + std::to_string(width));
  }
}

void require_three(const MultiImage& img, ColorSpace expected, const char* what) {
  if (img.channel_count() != 3 || img.space() != expected) {
    throw DimensionError(std::string(what) + ": expected a 3-channel " +
                         (expected == ColorSpace::RGB ? "RGB" : "YUV") + " image");
  }
}

std::vector<ImagePlane> three(ImagePlane a, ImagePlane b, ImagePlane c) {
  std::vector<ImagePlane> v;
  v.reserve(3);
  v.push_back(std::move(a));
  v.push_back(std::move(b));
  v.push_back(std::move(c));
  return v;
}

}  // namespace

ImagePlane::ImagePlane(int height, int width, double fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

ImagePlane::ImagePlane(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width);
  if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw DimensionError("plane data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
}

bool ImagePlane::is_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double ImagePlane::min() const { return *std::min_element(data_.begin(), data_.end()); }

double ImagePlane::max() const { return *std::max_element(data_.begin(), data_.end()); }

MultiImage::MultiImage(std::vector<ImagePlane> channels, ColorSpace space)
    : channels_(std::move(channels)), space_(space) {
  const std::size_t n = channels_.size();
  if (n != 1 && n != 3) {
    throw DimensionError("an image has 1 or 3 channels, got " + std::to_string(n));
  }
  if ((space_ == ColorSpace::Gray) != (n == 1)) {
    throw DimensionError("Gray images have exactly one channel; RGB/YUV have three");
  }
  for (const auto& c : channels_) {
    if (c.empty() || !c.same_shape(channels_[0])) {
      throw DimensionError("all channels must share the same non-empty dimensions");
    }
  }
}

MultiImage MultiImage::gray(ImagePlane plane) {
  std::vector<ImagePlane> ch;
  ch.push_back(std::move(plane));
  return MultiImage(std::move(ch), ColorSpace::Gray);
}

bool MultiImage::is_finite() const {
  return std::all_of(channels_.begin(), channels_.end(),
                     [](const ImagePlane& p) { return p.is_finite(); });
}

MultiImage rgb_to_yuv(const MultiImage& img) {
  require_three(img, ColorSpace::RGB, "rgb_to_yuv");
  const auto& r = img.channel(0);
  const auto& g = img.channel(1);
  const auto& b = img.channel(2);
  ImagePlane y(r.height(), r.width()), u(r.height(), r.width()), v(r.height(), r.width());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double luma = kLumaR * r.data()[i] + kLumaG * g.data()[i] + kLumaB * b.data()[i];
    y.data()[i] = luma;
    u.data()[i] = kChromaU * (b.data()[i] - luma);
    v.data()[i] = kChromaV * (r.data()[i] - luma);
  }
  return MultiImage(three(std::move(y), std::move(u), std::move(v)), ColorSpace::YUV);
}

MultiImage yuv_to_rgb(const MultiImage& img) {
  require_three(img, ColorSpace::YUV, "yuv_to_rgb");
  const auto& y = img.channel(0);
  const auto& u = img.channel(1);
  const auto& v = img.channel(2);
  ImagePlane r(y.height(), y.width()), g(y.height(), y.width()), b(y.height(), y.width());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double red = y.data()[i] + v.data()[i] / kChromaV;
    const double blue = y.data()[i] + u.data()[i] / kChromaU;
    r.data()[i] = red;
    b.data()[i] = blue;
    g.data()[i] = (y.data()[i] - kLumaR * red - kLumaB * blue) / kLumaG;
  }
  return MultiImage(three(std::move(r), std::move(g), std::move(b)), ColorSpace::RGB);
}

ImagePlane luminance(const MultiImage& rgb) {
  require_three(rgb, ColorSpace::RGB, "luminance");
  ImagePlane y(rgb.height(), rgb.width());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y.data()[i] = kLumaR * rgb.channel(0).data()[i] + kLumaG * rgb.channel(1).data()[i] +
                  kLumaB * rgb.channel(2).data()[i];
  }
  return y;
}

ImagePlane clip01(const ImagePlane& plane) {
  ImagePlane out = plane;
  for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

MultiImage clip01(const MultiImage& img) {
  std::vector<ImagePlane> ch;
  ch.reserve(img.channels().size());
  for (const auto& c : img.channels()) ch.push_back(clip01(c));
  return MultiImage(std::move(ch), img.space());
}

}  // namespace ils
