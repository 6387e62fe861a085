#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ils/image.hpp"

namespace ils {

// Periodic forward differences, operator [1, -1] along each axis:
//   grad_x(u)(r, c) = u(r, c+1 mod W) - u(r, c)
//   grad_y(u)(r, c) = u(r+1 mod H, c) - u(r, c)
ImagePlane grad_x(const ImagePlane& u);
ImagePlane grad_y(const ImagePlane& u);

/// Sum of the backward differences (operator [-1, 1]) of both fields, i.e.
/// Dx^T mu_x + Dy^T mu_y. Its transform equals
/// conj(F(grad_x)) F(mu_x) + conj(F(grad_y)) F(mu_y), so one FFT suffices.
ImagePlane adjoint_accumulate(const ImagePlane& mu_x, const ImagePlane& mu_y);

/// Which transform pair solve_ls runs. RealToComplex is the production path;
/// Complex keeps the full spectrum and reports the imaginary residue.
enum class SpectralPath { RealToComplex, Complex };

struct SolveStats;

namespace detail {
struct SpectralCore;
struct DataCache;
}  // namespace detail

/// Precomputed state for solving
///   (I + (c lambda / 2)(Dx^T Dx + Dy^T Dy)) u = f + (lambda / 2)(Dx^T mu_x + Dy^T mu_y)
/// on an H x W periodic grid.
///
/// The denominator and FFT plans are immutable and shared between copies, so
/// a plan can be used from several threads at once; solve scratch is per call.
class SolverPlan {
 public:
  int height() const;
  int width() const;
  double lambda() const;
  double c() const;
  SpectralPath path() const;

  /// Spectral denominator 1 + (c lambda/2)(4 sin^2(pi kx/W) + 4 sin^2(pi ky/H)),
  /// H x W, row index ky.
  std::span<const double> denominator() const;
  double denominator(int ky, int kx) const;

  bool has_cached_data() const { return static_cast<bool>(data_); }

  /// Same grid and weights, with F(f) cached for f.
  SolverPlan with_data(const ImagePlane& f) const;

  /// Same grid, FFT plans and cached data; new lambda and c.
  SolverPlan with_weights(double lambda, double c) const;

  /// Transforms executed by every plan sharing this grid (counts both paths).
  std::uint64_t forward_transforms() const;
  std::uint64_t inverse_transforms() const;

 private:
  friend SolverPlan make_plan(int, int, double, double, const ImagePlane*, SpectralPath);
  friend ImagePlane solve_ls(const SolverPlan&, const ImagePlane&, const ImagePlane&,
                             const ImagePlane&, SolveStats*);

  std::shared_ptr<const detail::SpectralCore> core_;
  std::shared_ptr<const std::vector<double>> denom_;
  std::shared_ptr<const detail::DataCache> data_;
  double lambda_ = 0.0;
  double c_ = 0.0;
};

/// Builds a plan for H x W planes. h, w >= 2; lambda > 0; c > 0. When `data`
/// is given its forward transform is cached.
SolverPlan make_plan(int height, int width, double lambda, double c,
                     const ImagePlane* data = nullptr,
                     SpectralPath path = SpectralPath::RealToComplex);

struct SolveStats {
  /// Largest |imaginary part| of the inverse transform before it was dropped.
  /// Always 0 on the real-to-complex path.
  double max_imaginary = 0.0;
  bool used_cached_data = false;
};

/// u = IFFT((F(f) + lambda/2 F(adjoint_accumulate(mu_x, mu_y))) / denominator).
/// One forward and one inverse transform per call. Throws DimensionError on
/// shape mismatch and NumericalError on non-finite input.
ImagePlane solve_ls(const SolverPlan& plan, const ImagePlane& f, const ImagePlane& mu_x,
                    const ImagePlane& mu_y, SolveStats* stats = nullptr);

/// Largest plane the dense oracle accepts (pixels).
inline constexpr std::size_t kDenseOracleMaxPixels = 4096;

/// Reference solution of the same periodic least-squares problem, assembled
/// as a dense SPD system from sparse difference matrices and factorized
/// directly. For verification only.
ImagePlane dense_oracle_solve(const ImagePlane& f, const ImagePlane& mu_x,
                              const ImagePlane& mu_y, double lambda, double c);

/// sum (u - f)^2 + lambda * sum_{x,y} 1/2 (sqrt(c) grad u - mu / sqrt(c))^2,
/// the quadratic minimized by solve_ls.
double ls_objective(const ImagePlane& u, const ImagePlane& f, const ImagePlane& mu_x,
                    const ImagePlane& mu_y, double lambda, double c);

/// Thread count used by FFT plans created afterwards (default 1).
void set_transform_threads(int threads);

}  // namespace ils
