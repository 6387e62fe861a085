#include "ils/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "fft_engine.hpp"
#include "ils/errors.hpp"

namespace ils {

namespace detail {

struct SpectralCore {
  SpectralCore(int h, int w, SpectralPath p) : engine(h, w), path(p) {}

  FftEngine engine;
  SpectralPath path;
  mutable std::atomic<std::uint64_t> forward{0};
  mutable std::atomic<std::uint64_t> inverse{0};
};

struct DataCache {
  ImagePlane f;
  // Half spectrum on the real path, full spectrum on the complex path.
  std::vector<Complex> f_hat;
};

}  // namespace detail

namespace {

using detail::Complex;

// Imaginary residue allowed on the complex path, relative to max(1, |u|max).
constexpr double kImaginaryTolerance = 1e-8;

void require_same_shape(const ImagePlane& a, const ImagePlane& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": plane sizes differ (" +
                         std::to_string(a.height()) + "x" + std::to_string(a.width()) + " vs " +
                         std::to_string(b.height()) + "x" + std::to_string(b.width()) + ")");
  }
}

std::vector<double> build_denominator(int h, int w, double lambda, double c) {
  std::vector<double> sx(static_cast<std::size_t>(w)), sy(static_cast<std::size_t>(h));
  for (int k = 0; k < w; ++k) {
    const double s = std::sin(std::numbers::pi * k / w);
    sx[static_cast<std::size_t>(k)] = 4.0 * s * s;  // 2 - 2cos(2 pi k / w)
  }
  for (int k = 0; k < h; ++k) {
    const double s = std::sin(std::numbers::pi * k / h);
    sy[static_cast<std::size_t>(k)] = 4.0 * s * s;
  }
  const double weight = 0.5 * c * lambda;
  std::vector<double> denom(static_cast<std::size_t>(h) * w);
  for (int ky = 0; ky < h; ++ky) {
    for (int kx = 0; kx < w; ++kx) {
      denom[static_cast<std::size_t>(ky) * w + kx] =
          1.0 + weight * (sx[static_cast<std::size_t>(kx)] + sy[static_cast<std::size_t>(ky)]);
    }
  }
  return denom;
}

std::vector<Complex> transform(const detail::SpectralCore& core, const ImagePlane& f) {
  const auto& eng = core.engine;
  if (core.path == SpectralPath::RealToComplex) {
    auto in = detail::fftw_alloc<double>(eng.pixels());
    auto out = detail::fftw_alloc<Complex>(eng.half_size());
    std::copy(f.data(), f.data() + f.size(), in.get());
    eng.forward_real(in.get(), out.get());
    core.forward.fetch_add(1, std::memory_order_relaxed);
    return {out.get(), out.get() + eng.half_size()};
  }
  auto in = detail::fftw_alloc<Complex>(eng.pixels());
  auto out = detail::fftw_alloc<Complex>(eng.pixels());
  for (std::size_t i = 0; i < f.size(); ++i) in[i] = Complex(f.data()[i], 0.0);
  eng.forward_complex(in.get(), out.get());
  core.forward.fetch_add(1, std::memory_order_relaxed);
  return {out.get(), out.get() + eng.pixels()};
}

}  // namespace

ImagePlane grad_x(const ImagePlane& u) {
  const int h = u.height(), w = u.width();
  ImagePlane g(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      g(r, c) = u(r, c + 1 == w ? 0 : c + 1) - u(r, c);
    }
  }
  return g;
}

ImagePlane grad_y(const ImagePlane& u) {
  const int h = u.height(), w = u.width();
  ImagePlane g(h, w);
  for (int r = 0; r < h; ++r) {
    const int down = r + 1 == h ? 0 : r + 1;
    for (int c = 0; c < w; ++c) g(r, c) = u(down, c) - u(r, c);
  }
  return g;
}

ImagePlane adjoint_accumulate(const ImagePlane& mu_x, const ImagePlane& mu_y) {
  require_same_shape(mu_x, mu_y, "adjoint_accumulate");
  const int h = mu_x.height(), w = mu_x.width();
  ImagePlane out(h, w);
  for (int r = 0; r < h; ++r) {
    const int up = r == 0 ? h - 1 : r - 1;
    for (int c = 0; c < w; ++c) {
      const int left = c == 0 ? w - 1 : c - 1;
      out(r, c) = (mu_x(r, left) - mu_x(r, c)) + (mu_y(up, c) - mu_y(r, c));
    }
  }
  return out;
}

int SolverPlan::height() const { return core_->engine.height(); }
int SolverPlan::width() const { return core_->engine.width(); }
double SolverPlan::lambda() const { return lambda_; }
double SolverPlan::c() const { return c_; }
SpectralPath SolverPlan::path() const { return core_->path; }

std::span<const double> SolverPlan::denominator() const { return *denom_; }

double SolverPlan::denominator(int ky, int kx) const {
  return (*denom_)[static_cast<std::size_t>(ky) * width() + kx];
}

SolverPlan SolverPlan::with_data(const ImagePlane& f) const {
  if (f.height() != height() || f.width() != width()) {
    throw DimensionError("with_data: plane does not match the plan size");
  }
  if (!f.is_finite()) throw NumericalError("with_data: non-finite values in data plane");
  SolverPlan out = *this;
  auto cache = std::make_shared<detail::DataCache>();
  cache->f = f;
  cache->f_hat = transform(*core_, f);
  out.data_ = std::move(cache);
  return out;
}

SolverPlan SolverPlan::with_weights(double lambda, double c) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be > 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("c must be > 0");
  SolverPlan out = *this;
  out.lambda_ = lambda;
  out.c_ = c;
  out.denom_ = std::make_shared<const std::vector<double>>(
      build_denominator(height(), width(), lambda, c));
  return out;
}

std::uint64_t SolverPlan::forward_transforms() const { return core_->forward.load(); }
std::uint64_t SolverPlan::inverse_transforms() const { return core_->inverse.load(); }

SolverPlan make_plan(int height, int width, double lambda, double c, const ImagePlane* data,
                     SpectralPath path) {
  if (height < 2 || width < 2) {
    throw ParameterError("solver plan needs at least 2x2 pixels, got " +
                         std::to_string(height) + "x" + std::to_string(width));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be > 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("c must be > 0");
  SolverPlan plan;
  plan.core_ = std::make_shared<detail::SpectralCore>(height, width, path);
  plan.lambda_ = lambda;
  plan.c_ = c;
  plan.denom_ =
      std::make_shared<const std::vector<double>>(build_denominator(height, width, lambda, c));
  if (data != nullptr) plan = plan.with_data(*data);
  return plan;
}

ImagePlane solve_ls(const SolverPlan& plan, const ImagePlane& f, const ImagePlane& mu_x,
                    const ImagePlane& mu_y, SolveStats* stats) {
  const int h = plan.height(), w = plan.width();
  if (f.height() != h || f.width() != w) {
    throw DimensionError("solve_ls: data plane does not match the plan size");
  }
  require_same_shape(f, mu_x, "solve_ls");
  require_same_shape(f, mu_y, "solve_ls");
  if (!f.is_finite() || !mu_x.is_finite() || !mu_y.is_finite()) {
    throw NumericalError("solve_ls: non-finite values in input planes");
  }

  const auto& core = *plan.core_;
  const auto& eng = core.engine;
  const auto& denom = *plan.denom_;
  const double half_lambda = 0.5 * plan.lambda_;
  const std::size_t n = eng.pixels();
  const double inv_n = 1.0 / static_cast<double>(n);

  // With F(f) cached only the adjoint term is transformed. Otherwise the
  // right-hand side f + lambda/2 * adj is formed in the pixel domain, which by
  // linearity also needs a single forward transform.
  const bool cached = plan.data_ && plan.data_->f == f;
  ImagePlane rhs = adjoint_accumulate(mu_x, mu_y);
  if (!cached) {
    for (std::size_t i = 0; i < n; ++i) rhs.data()[i] = f.data()[i] + half_lambda * rhs.data()[i];
  }
  const double adj_weight = cached ? half_lambda : 1.0;

  ImagePlane u(h, w);
  double max_imag = 0.0;
  if (core.path == SpectralPath::RealToComplex) {
    const int hw = eng.half_width();
    auto real = detail::fftw_alloc<double>(n);
    auto spec = detail::fftw_alloc<Complex>(eng.half_size());
    std::copy(rhs.data(), rhs.data() + n, real.get());
    eng.forward_real(real.get(), spec.get());
    core.forward.fetch_add(1, std::memory_order_relaxed);
    for (int ky = 0; ky < h; ++ky) {
      for (int kx = 0; kx < hw; ++kx) {
        const std::size_t k = static_cast<std::size_t>(ky) * hw + kx;
        Complex num = adj_weight * spec[k];
        if (cached) num += plan.data_->f_hat[k];
        spec[k] = num / denom[static_cast<std::size_t>(ky) * w + kx];
      }
    }
    eng.inverse_real(spec.get(), real.get());
    core.inverse.fetch_add(1, std::memory_order_relaxed);
    for (std::size_t i = 0; i < n; ++i) u.data()[i] = real[i] * inv_n;
  } else {
    auto a = detail::fftw_alloc<Complex>(n);
    auto b = detail::fftw_alloc<Complex>(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = Complex(rhs.data()[i], 0.0);
    eng.forward_complex(a.get(), b.get());
    core.forward.fetch_add(1, std::memory_order_relaxed);
    for (std::size_t k = 0; k < n; ++k) {
      Complex num = adj_weight * b[k];
      if (cached) num += plan.data_->f_hat[k];
      b[k] = num / denom[k];
    }
    eng.inverse_complex(b.get(), a.get());
    core.inverse.fetch_add(1, std::memory_order_relaxed);
    double max_real = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      u.data()[i] = a[i].real() * inv_n;
      max_real = std::max(max_real, std::abs(u.data()[i]));
      max_imag = std::max(max_imag, std::abs(a[i].imag() * inv_n));
    }
    if (max_imag > kImaginaryTolerance * std::max(1.0, max_real)) {
      throw NumericalError("solve_ls: inverse transform left an imaginary residue of " +
                           std::to_string(max_imag));
    }
  }
  if (stats != nullptr) {
    stats->max_imaginary = max_imag;
    stats->used_cached_data = cached;
  }
  return u;
}

ImagePlane dense_oracle_solve(const ImagePlane& f, const ImagePlane& mu_x, const ImagePlane& mu_y,
                              double lambda, double c) {
  require_same_shape(f, mu_x, "dense_oracle_solve");
  require_same_shape(f, mu_y, "dense_oracle_solve");
  if (f.size() > kDenseOracleMaxPixels) {
    throw NumericalError("dense_oracle_solve: refusing a dense solve of " +
                         std::to_string(f.size()) + " pixels (limit " +
                         std::to_string(kDenseOracleMaxPixels) + ")");
  }
  if (!(lambda >= 0.0) || !(c > 0.0)) throw ParameterError("dense_oracle_solve: bad lambda or c");

  const int h = f.height(), w = f.width();
  const auto n = static_cast<Eigen::Index>(f.size());
  auto idx = [w](int r, int col) { return static_cast<Eigen::Index>(r) * w + col; };

  using Sparse = Eigen::SparseMatrix<double>;
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> tx, ty;
  tx.reserve(2 * static_cast<std::size_t>(n));
  ty.reserve(2 * static_cast<std::size_t>(n));
  for (int r = 0; r < h; ++r) {
    for (int col = 0; col < w; ++col) {
      const auto row = idx(r, col);
      // Entries accumulate, which matters when the grid is only 1 wide.
      tx.emplace_back(row, idx(r, (col + 1) % w), 1.0);
      tx.emplace_back(row, row, -1.0);
      ty.emplace_back(row, idx((r + 1) % h, col), 1.0);
      ty.emplace_back(row, row, -1.0);
    }
  }
  Sparse dx(n, n), dy(n, n);
  dx.setFromTriplets(tx.begin(), tx.end());
  dy.setFromTriplets(ty.begin(), ty.end());

  const Sparse lap = Sparse(dx.transpose() * dx) + Sparse(dy.transpose() * dy);
  Eigen::MatrixXd a = Eigen::MatrixXd(lap) * (0.5 * c * lambda);
  a.diagonal().array() += 1.0;

  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), n), mx(mu_x.data(), n), my(mu_y.data(), n);
  const Eigen::VectorXd b = fv + (0.5 * lambda) * (dx.transpose() * mx + dy.transpose() * my);

  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("dense_oracle_solve: factorization failed");
  const Eigen::VectorXd u = llt.solve(b);
  return ImagePlane(h, w, std::vector<double>(u.data(), u.data() + n));
}

double ls_objective(const ImagePlane& u, const ImagePlane& f, const ImagePlane& mu_x,
                    const ImagePlane& mu_y, double lambda, double c) {
  require_same_shape(u, f, "ls_objective");
  require_same_shape(u, mu_x, "ls_objective");
  require_same_shape(u, mu_y, "ls_objective");
  const ImagePlane gx = grad_x(u);
  const ImagePlane gy = grad_y(u);
  const double sc = std::sqrt(c);
  double data = 0.0, smooth = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u.data()[i] - f.data()[i];
    const double rx = sc * gx.data()[i] - mu_x.data()[i] / sc;
    const double ry = sc * gy.data()[i] - mu_y.data()[i] / sc;
    data += d * d;
    smooth += 0.5 * (rx * rx + ry * ry);
  }
  return data + lambda * smooth;
}

void set_transform_threads(int threads) { detail::set_fftw_threads(threads); }

}  // namespace ils
