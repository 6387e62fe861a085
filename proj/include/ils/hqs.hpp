#pragma once

#include <optional>

#include "ils/image.hpp"

namespace ils {

/// Half-quadratic splitting for the anisotropic TV (L1) objective
///   min_u sum (u - f)^2 + lambda |grad u|
/// with a growing coupling weight beta_n = beta0 * kappa^n.
struct HqsParams {
  double lambda = 0.25;
  /// Defaults to 2 * lambda.
  std::optional<double> beta0;
  double kappa = 2.0;
  int iterations = 4;

  double initial_beta() const { return beta0.value_or(2.0 * lambda); }
  void validate() const;
};

/// Alternates Q1 mu = soft_threshold(grad u, lambda / (2 beta)) and
/// Q2 u = argmin (u - f)^2 + beta (grad u - mu)^2, starting from u = f.
ImagePlane hqs_smooth_plane(const ImagePlane& f, const HqsParams& params);

/// Gray or RGB (per channel) convenience wrapper.
MultiImage hqs_smooth(const MultiImage& img, const HqsParams& params);

}  // namespace ils
