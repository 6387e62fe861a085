#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ils {

/// Single-channel 2-D grid of intensities, row-major, origin at top-left.
///
/// LDR planes hold values in [0,1]; log-luminance planes used by the tone
/// mappers are unbounded. Finiteness is checked where data enters the public
/// API (see is_finite()), not on every construction.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int height, int width, double fill = 0.0);
  ImagePlane(int height, int width, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int row, int col) { return data_[index(row, col)]; }
  double operator()(int row, int col) const { return data_[index(row, col)]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const ImagePlane& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool is_finite() const;
  double min() const;
  double max() const;

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

enum class ColorSpace { Gray, RGB, YUV };

enum class ColorMode { PerChannelRGB, LuminanceOnly };

/// One or three planes of identical size tagged with their color space.
class MultiImage {
 public:
  MultiImage() = default;
  MultiImage(std::vector<ImagePlane> channels, ColorSpace space);

  static MultiImage gray(ImagePlane plane);

  ColorSpace space() const { return space_; }
  int channel_count() const { return static_cast<int>(channels_.size()); }
  int height() const { return channels_.empty() ? 0 : channels_[0].height(); }
  int width() const { return channels_.empty() ? 0 : channels_[0].width(); }

  const ImagePlane& channel(int i) const { return channels_.at(static_cast<std::size_t>(i)); }
  ImagePlane& channel(int i) { return channels_.at(static_cast<std::size_t>(i)); }
  const std::vector<ImagePlane>& channels() const { return channels_; }

  bool is_finite() const;

  friend bool operator==(const MultiImage&, const MultiImage&) = default;

 private:
  std::vector<ImagePlane> channels_;
  ColorSpace space_ = ColorSpace::Gray;
};

// BT.601 full-range luma with the analog U/V scale factors.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;
inline constexpr double kChromaU = 0.492;
inline constexpr double kChromaV = 0.877;

MultiImage rgb_to_yuv(const MultiImage& img);

/// Exact inverse of rgb_to_yuv. The result is not clipped.
MultiImage yuv_to_rgb(const MultiImage& img);

/// Luma channel only, Y = 0.299R + 0.587G + 0.114B.
ImagePlane luminance(const MultiImage& rgb);

ImagePlane clip01(const ImagePlane& plane);
MultiImage clip01(const MultiImage& img);

}  // namespace ils
