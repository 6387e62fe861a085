#include "ils/applications.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ils/errors.hpp"

namespace ils {

namespace {

constexpr double kMinDynamicRange = 1e-9;

void check_tonemap_inputs(const ImagePlane& lum, const MultiImage& rgb) {
  if (rgb.channel_count() != 3 || rgb.space() != ColorSpace::RGB) {
    throw DimensionError("tone mapping expects an RGB image");
  }
  if (!lum.same_shape(rgb.channel(0))) {
    throw DimensionError("luminance plane and RGB image differ in size");
  }
  if (!lum.is_finite() || !rgb.is_finite()) throw NumericalError("non-finite HDR input");
  for (double v : lum.values()) {
    if (!(v > 0.0)) throw ParameterError("HDR luminance must be strictly positive");
  }
  for (const auto& ch : rgb.channels()) {
    for (double v : ch.values()) {
      if (v < 0.0) throw ParameterError("HDR color channels must be non-negative");
    }
  }
}

ImagePlane log_luminance(const ImagePlane& lum, double offset) {
  ImagePlane out(lum.height(), lum.width());
  for (std::size_t i = 0; i < lum.size(); ++i) out.data()[i] = std::log10(lum.data()[i] + offset);
  return out;
}

// Shifts the base so its maximum maps to 0 and scales it to span target_range.
ImagePlane compress_base(const ImagePlane& base, double target_range, TonemapReport* report) {
  const double lo = base.min();
  const double hi = base.max();
  if (hi - lo < kMinDynamicRange) {
    throw NumericalError("base layer has no dynamic range to compress");
  }
  const double cf = target_range / (hi - lo);
  ImagePlane out(base.height(), base.width());
  for (std::size_t i = 0; i < base.size(); ++i) out.data()[i] = (base.data()[i] - hi) * cf;
  if (report) {
    report->base_min = lo;
    report->base_max = hi;
    report->compression = cf;
    report->compressed_base_range = out.max() - out.min();
  }
  return out;
}

MultiImage recolor(const ImagePlane& lum, const MultiImage& rgb, const ImagePlane& log_out,
                   double saturation) {
  std::vector<ImagePlane> out;
  out.reserve(3);
  for (const auto& ch : rgb.channels()) {
    ImagePlane c(lum.height(), lum.width());
    for (std::size_t i = 0; i < lum.size(); ++i) {
      const double ratio = ch.data()[i] / lum.data()[i];
      c.data()[i] = std::pow(ratio, saturation) * std::pow(10.0, log_out.data()[i]);
    }
    out.push_back(clip01(c));
  }
  return MultiImage(std::move(out), ColorSpace::RGB);
}

std::vector<double> gaussian_taps(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * k * k / (sigma * sigma));
    taps[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

MultiImage welsch_smooth(const MultiImage& img, double gamma, double lambda, int iterations,
                         int threads) {
  SmoothParams params;
  params.penalty = Welsch{gamma};
  params.lambda = lambda;
  params.iterations = iterations;
  params.c = 2.0;
  return clip01(smooth_color(img, params, threads));
}

}  // namespace

MultiImage detail_enhance(const MultiImage& img, const SmoothParams& params, DetailBoost boost,
                          int threads) {
  if (!std::isfinite(boost.k) || boost.k < 0.0) throw ParameterError("boost k must be >= 0");
  const MultiImage base = smooth_color(img, params, threads);
  const double gain = boost.k - 1.0;
  std::vector<ImagePlane> out;
  out.reserve(img.channels().size());
  for (int ch = 0; ch < img.channel_count(); ++ch) {
    const ImagePlane& f = img.channel(ch);
    const ImagePlane& u = base.channel(ch);
    ImagePlane e(f.height(), f.width());
    for (std::size_t i = 0; i < f.size(); ++i) {
      e.data()[i] = f.data()[i] + gain * (f.data()[i] - u.data()[i]);
    }
    out.push_back(clip01(e));
  }
  return MultiImage(std::move(out), img.space());
}

void TonemapParams::validate() const {
  base.validate();
  if (!(target_range > 0.0) || !std::isfinite(target_range)) {
    throw ParameterError("target range must be > 0");
  }
  if (!(saturation > 0.0 && saturation <= 1.0)) throw ParameterError("saturation must be in (0,1]");
  if (!(log_offset >= 0.0) || !std::isfinite(log_offset)) {
    throw ParameterError("log offset must be >= 0");
  }
}

void MultiScaleTonemapParams::validate() const {
  tone.validate();
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ParameterError("lambda must be > 0");
  }
  if (lambdas[0] > lambdas[1] || lambdas[1] > lambdas[2]) {
    throw ParameterError("multi-scale lambdas must increase from fine to coarse");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw ParameterError("detail weights must be finite");
  }
}

MultiImage tonemap_single(const ImagePlane& hdr_luminance, const MultiImage& rgb,
                          const TonemapParams& tp, TonemapReport* report) {
  tp.validate();
  check_tonemap_inputs(hdr_luminance, rgb);
  const ImagePlane log_lum = log_luminance(hdr_luminance, tp.log_offset);
  const ImagePlane base = smooth_plane(log_lum, tp.base);
  ImagePlane out = compress_base(base, tp.target_range, report);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] += log_lum.data()[i] - base.data()[i];
  }
  return recolor(hdr_luminance, rgb, out, tp.saturation);
}

MultiImage tonemap_multi(const ImagePlane& hdr_luminance, const MultiImage& rgb,
                         const MultiScaleTonemapParams& tp, TonemapReport* report) {
  tp.validate();
  check_tonemap_inputs(hdr_luminance, rgb);
  const ImagePlane log_lum = log_luminance(hdr_luminance, tp.tone.log_offset);
  std::array<ImagePlane, 3> bases;
  for (std::size_t i = 0; i < 3; ++i) {
    SmoothParams p = tp.tone.base;
    p.lambda = tp.lambdas[i];
    bases[i] = smooth_plane(log_lum, p);
  }
  ImagePlane out = compress_base(bases[2], tp.tone.target_range, report);
  const auto& [w0, w1, w2] = tp.weights;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d0 = log_lum.data()[i] - bases[0].data()[i];
    const double d1 = bases[0].data()[i] - bases[1].data()[i];
    const double d2 = bases[1].data()[i] - bases[2].data()[i];
    out.data()[i] += w2 * d2 + w1 * d1 + w0 * d0;
  }
  return recolor(hdr_luminance, rgb, out, tp.tone.saturation);
}

MultiImage clipart_clean(const MultiImage& img, double gamma, double lambda, int threads) {
  return welsch_smooth(img, gamma, lambda, kClipartIterations, threads);
}

MultiImage texture_smooth(const MultiImage& img, double gamma, double lambda, double sigma_pre,
                          int threads) {
  if (!(sigma_pre >= 0.0) || !std::isfinite(sigma_pre)) {
    throw ParameterError("pre-smoothing sigma must be >= 0");
  }
  std::vector<ImagePlane> blurred;
  blurred.reserve(img.channels().size());
  for (const auto& ch : img.channels()) blurred.push_back(gaussian_blur(ch, sigma_pre));
  return welsch_smooth(MultiImage(std::move(blurred), img.space()), gamma, lambda,
                       kTextureIterations, threads);
}

ImagePlane gaussian_blur(const ImagePlane& plane, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be >= 0");
  if (sigma == 0.0) return plane;
  const std::vector<double> taps = gaussian_taps(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const int h = plane.height(), w = plane.width();

  ImagePlane tmp(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * plane(r, std::clamp(c + k, 0, w - 1));
      }
      tmp(r, c) = acc;
    }
  }
  ImagePlane out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * tmp(std::clamp(r + k, 0, h - 1), c);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace ils
