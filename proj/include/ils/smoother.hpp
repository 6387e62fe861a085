#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ils/image.hpp"
#include "ils/penalty.hpp"

namespace ils {

inline constexpr int kDefaultIterations = 4;

/// Knobs of the iterative least squares smoother.
struct SmoothParams {
  PenaltySpec penalty = Charbonnier{};
  double lambda = 1.0;
  int iterations = kDefaultIterations;
  /// Bound curvature; c0(penalty) when unset.
  std::optional<double> c;
  ColorMode color_mode = ColorMode::PerChannelRGB;

  double curvature() const;
  /// Throws ParameterError on lambda <= 0, iterations < 1, c < c0 or a bad penalty.
  void validate() const;
};

/// Objective value per iterate; energies[0] is the energy of the input.
struct EnergyTrace {
  std::vector<double> energies;

  /// (E0 - En) / (E0 - final_energy). Returns 1 when the reference decrease is
  /// zero, i.e. there was nothing left to minimize.
  double rel_decrease(std::size_t n, double final_energy) const;
  /// Same, referenced to the last recorded energy.
  double rel_decrease(std::size_t n) const;
};

/// sum_s (u_s - f_s)^2 + lambda sum_s [phi(grad_x u)_s + phi(grad_y u)_s], periodic gradients.
double energy(const ImagePlane& u, const ImagePlane& f, const PenaltySpec& spec, double lambda);

/// The augmented objective with auxiliary fields mu_x, mu_y, evaluated through
/// the psi oracle. Equals energy() when mu comes from mu_update at u and is
/// never smaller otherwise. Slow; intended for verification.
double augmented_energy(const ImagePlane& u, const ImagePlane& f, const ImagePlane& mu_x,
                        const ImagePlane& mu_y, const PenaltySpec& spec, double lambda, double c);

/// Runs params.iterations steps of
///   mu = c grad u - phi'(grad u);  u <- argmin_u LS(u; f, mu)
/// starting from u = f. When `trace` is given it is overwritten with E(u^0..u^N).
/// Throws NumericalError naming the iteration if a non-finite value appears.
ImagePlane smooth_plane(const ImagePlane& f, const SmoothParams& params,
                        EnergyTrace* trace = nullptr);

/// Gray: smooth_plane. RGB + PerChannelRGB: every channel independently with a
/// shared solver plan, up to `threads` channels at once. RGB + LuminanceOnly:
/// smooth Y of the YUV decomposition and convert back. For color inputs the
/// trace holds the per-iteration energy summed over processed channels.
MultiImage smooth_color(const MultiImage& img, const SmoothParams& params, int threads = 1,
                        EnergyTrace* trace = nullptr);

}  // namespace ils
