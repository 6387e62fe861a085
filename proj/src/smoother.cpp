#include "ils/smoother.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "ils/errors.hpp"
#include "ils/spectral.hpp"

namespace ils {

namespace {

void require_same_shape(const ImagePlane& a, const ImagePlane& b, const char* what) {
  if (!a.same_shape(b)) throw DimensionError(std::string(what) + ": plane sizes differ");
}

double energy_unchecked(const ImagePlane& u, const ImagePlane& f,
                        const detail::PenaltyKernel& kernel, double lambda) {
  const int h = u.height(), w = u.width();
  double data = 0.0, reg = 0.0;
  for (int r = 0; r < h; ++r) {
    const int down = r + 1 == h ? 0 : r + 1;
    for (int col = 0; col < w; ++col) {
      const int right = col + 1 == w ? 0 : col + 1;
      const double d = u(r, col) - f(r, col);
      data += d * d;
      reg += kernel.phi(u(r, right) - u(r, col)) + kernel.phi(u(down, col) - u(r, col));
    }
  }
  return data + lambda * reg;
}

ImagePlane mu_field(const ImagePlane& grad, const detail::PenaltyKernel& kernel, double c) {
  ImagePlane mu(grad.height(), grad.width());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double x = grad.data()[i];
    mu.data()[i] = c * x - kernel.phi_prime(x);
  }
  return mu;
}

// Core loop; `plan` must already hold F(f).
ImagePlane run_ils(const ImagePlane& f, const SmoothParams& params, const SolverPlan& plan,
                   std::vector<double>* energies) {
  const detail::PenaltyKernel kernel(params.penalty);
  const double c = params.curvature();
  ImagePlane u = f;
  if (energies) energies->push_back(energy_unchecked(u, f, kernel, params.lambda));
  for (int n = 0; n < params.iterations; ++n) {
    const ImagePlane mu_x = mu_field(grad_x(u), kernel, c);
    const ImagePlane mu_y = mu_field(grad_y(u), kernel, c);
    if (!mu_x.is_finite() || !mu_y.is_finite()) {
      throw NumericalError("non-finite auxiliary field at iteration " + std::to_string(n));
    }
    u = solve_ls(plan, f, mu_x, mu_y);
    if (!u.is_finite()) {
      throw NumericalError("non-finite smoothing result at iteration " + std::to_string(n));
    }
    if (energies) energies->push_back(energy_unchecked(u, f, kernel, params.lambda));
  }
  return u;
}

void check_input(const ImagePlane& f) {
  if (f.empty()) throw DimensionError("cannot smooth an empty plane");
  if (!f.is_finite()) throw NumericalError("input plane contains non-finite values");
}

std::vector<double> sum_traces(const std::vector<std::vector<double>>& per_channel) {
  std::vector<double> total(per_channel.front().size(), 0.0);
  for (const auto& e : per_channel) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += e[i];
  }
  return total;
}

}  // namespace

double SmoothParams::curvature() const { return c.has_value() ? *c : c0(penalty); }

void SmoothParams::validate() const {
  ils::validate(penalty);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be > 0");
  if (iterations < 1) throw ParameterError("iterations must be >= 1");
  if (c.has_value()) {
    const double floor = c0(penalty);
    if (!std::isfinite(*c) || *c < floor * (1.0 - 1e-12)) {
      throw ParameterError("c must be >= c0 = " + std::to_string(floor));
    }
  }
}

double EnergyTrace::rel_decrease(std::size_t n, double final_energy) const {
  const double total = energies.at(0) - final_energy;
  if (!(total > 0.0)) return 1.0;
  return (energies.at(0) - energies.at(n)) / total;
}

double EnergyTrace::rel_decrease(std::size_t n) const {
  return rel_decrease(n, energies.at(energies.size() - 1));
}

double energy(const ImagePlane& u, const ImagePlane& f, const PenaltySpec& spec, double lambda) {
  require_same_shape(u, f, "energy");
  validate(spec);
  return energy_unchecked(u, f, detail::PenaltyKernel(spec), lambda);
}

double augmented_energy(const ImagePlane& u, const ImagePlane& f, const ImagePlane& mu_x,
                        const ImagePlane& mu_y, const PenaltySpec& spec, double lambda, double c) {
  require_same_shape(u, f, "augmented_energy");
  require_same_shape(u, mu_x, "augmented_energy");
  require_same_shape(u, mu_y, "augmented_energy");
  const ImagePlane gx = grad_x(u);
  const ImagePlane gy = grad_y(u);
  double data = 0.0, reg = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u.data()[i] - f.data()[i];
    data += d * d;
    reg += bound(spec, c, gx.data()[i], mu_x.data()[i]) +
           bound(spec, c, gy.data()[i], mu_y.data()[i]);
  }
  return data + lambda * reg;
}

ImagePlane smooth_plane(const ImagePlane& f, const SmoothParams& params, EnergyTrace* trace) {
  params.validate();
  check_input(f);
  const SolverPlan plan =
      make_plan(f.height(), f.width(), params.lambda, params.curvature(), &f);
  std::vector<double> energies;
  ImagePlane u = run_ils(f, params, plan, trace ? &energies : nullptr);
  if (trace) trace->energies = std::move(energies);
  return u;
}

MultiImage smooth_color(const MultiImage& img, const SmoothParams& params, int threads,
                        EnergyTrace* trace) {
  params.validate();
  if (img.space() == ColorSpace::YUV) {
    throw ParameterError("smooth_color expects Gray or RGB input, got YUV");
  }
  if (img.space() == ColorSpace::Gray) {
    return MultiImage::gray(smooth_plane(img.channel(0), params, trace));
  }
  if (params.color_mode == ColorMode::LuminanceOnly) {
    MultiImage yuv = rgb_to_yuv(img);
    yuv.channel(0) = smooth_plane(yuv.channel(0), params, trace);
    return yuv_to_rgb(yuv);
  }

  for (const auto& ch : img.channels()) check_input(ch);
  const SolverPlan shared =
      make_plan(img.height(), img.width(), params.lambda, params.curvature());
  std::vector<ImagePlane> out(3);
  std::vector<std::vector<double>> energies(3);
  std::vector<std::exception_ptr> errors(3);
  auto work = [&](int ch) {
    try {
      const ImagePlane& f = img.channel(ch);
      out[ch] = run_ils(f, params, shared.with_data(f), trace ? &energies[ch] : nullptr);
    } catch (...) {
      errors[ch] = std::current_exception();
    }
  };
  if (threads <= 1) {
    for (int ch = 0; ch < 3; ++ch) work(ch);
  } else {
    std::vector<std::jthread> pool;
    const int active = threads < 3 ? threads : 3;
    for (int t = 0; t < active; ++t) {
      pool.emplace_back([&, t] {
        for (int ch = t; ch < 3; ch += active) work(ch);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (trace) trace->energies = sum_traces(energies);
  return MultiImage(std::move(out), ColorSpace::RGB);
}

}  // namespace ils
