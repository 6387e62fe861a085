#pragma once

#include <array>

#include "ils/image.hpp"
#include "ils/smoother.hpp"

namespace ils {

inline constexpr int kClipartIterations = 10;
inline constexpr int kTextureIterations = 15;
inline constexpr double kDefaultTextureSigma = 1.0;

struct DetailBoost {
  double k = 3.0;
};

/// Base/detail manipulation: u = smooth_color(img), out = clip01(u + k (img - u)).
/// Evaluated as img + (k - 1)(img - u), so k = 1 reproduces the input exactly.
MultiImage detail_enhance(const MultiImage& img, const SmoothParams& params,
                          DetailBoost boost = {}, int threads = 1);

/// p = 1, lambda = 10, smoothing the log10 luminance in its native range.
inline SmoothParams default_tonemap_smoothing() {
  SmoothParams p;
  p.penalty = Charbonnier{1.0, kDefaultEpsilon};
  p.lambda = 10.0;
  return p;
}

struct TonemapParams {
  SmoothParams base = default_tonemap_smoothing();
  /// Output range of the compressed base layer, log10 units.
  double target_range = 2.0;
  /// Exponent applied to the per-channel color ratio C / L.
  double saturation = 0.6;
  double log_offset = 1e-6;

  void validate() const;
};

struct MultiScaleTonemapParams {
  TonemapParams tone{};
  /// Fine to coarse, non-decreasing.
  std::array<double, 3> lambdas{0.125, 1.0, 8.0};
  /// Gains of the detail layers d0 = L - b1, d1 = b1 - b2, d2 = b2 - b3.
  std::array<double, 3> weights{1.0, 1.0, 1.0};

  void validate() const;
};

struct TonemapReport {
  double base_min = 0.0;
  double base_max = 0.0;
  double compression = 0.0;
  /// max - min of the compressed base, equal to target_range by construction.
  double compressed_base_range = 0.0;
};

/// Single-scale HDR compression in the log10 luminance domain:
///   L = log10(lum + offset), b = smooth(L), d = L - b,
///   L' = (b - max b) R / (max b - min b) + d,
///   C' = clip01((C / lum)^s 10^L').
/// `rgb` holds linear, non-negative HDR values; `hdr_luminance` must be > 0.
/// Throws NumericalError when the base layer has no dynamic range.
MultiImage tonemap_single(const ImagePlane& hdr_luminance, const MultiImage& rgb,
                          const TonemapParams& tp, TonemapReport* report = nullptr);

/// Three-scale variant: b_i = smooth(L, lambda_i), the coarsest base is
/// compressed and the detail layers are added back with their weights.
MultiImage tonemap_multi(const ImagePlane& hdr_luminance, const MultiImage& rgb,
                         const MultiScaleTonemapParams& tp, TonemapReport* report = nullptr);

/// Welsch-penalty smoothing with c = 2 and 10 iterations, clipped to [0,1].
MultiImage clipart_clean(const MultiImage& img, double gamma, double lambda, int threads = 1);

/// Gaussian pre-blur followed by Welsch smoothing with 15 iterations, clipped.
MultiImage texture_smooth(const MultiImage& img, double gamma, double lambda,
                          double sigma_pre = kDefaultTextureSigma, int threads = 1);

/// Separable Gaussian, radius ceil(3 sigma), normalized taps, replicated
/// borders. sigma = 0 returns the input.
ImagePlane gaussian_blur(const ImagePlane& plane, double sigma);

}  // namespace ils
