#include "ils/hqs.hpp"

#include <cmath>
#include <string>

#include "ils/errors.hpp"
#include "ils/penalty.hpp"
#include "ils/spectral.hpp"

namespace ils {

namespace {

ImagePlane shrink(const ImagePlane& grad, double alpha) {
  ImagePlane mu(grad.height(), grad.width());
  for (std::size_t i = 0; i < grad.size(); ++i) mu.data()[i] = soft_threshold(grad.data()[i], alpha);
  return mu;
}

}  // namespace

void HqsParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be > 0");
  if (!(initial_beta() > 0.0) || !std::isfinite(initial_beta())) {
    throw ParameterError("beta0 must be > 0");
  }
  if (!(kappa > 1.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be > 1");
  if (iterations < 1) throw ParameterError("iterations must be >= 1");
}

ImagePlane hqs_smooth_plane(const ImagePlane& f, const HqsParams& params) {
  params.validate();
  if (!f.is_finite()) throw NumericalError("input plane contains non-finite values");

  // Q2 is the ILS least-squares step with lambda -> 2 beta and c -> 1.
  double beta = params.initial_beta();
  SolverPlan plan = make_plan(f.height(), f.width(), 2.0 * beta, 1.0, &f);
  ImagePlane u = f;
  for (int n = 0; n < params.iterations; ++n) {
    if (n > 0) {
      beta *= params.kappa;
      plan = plan.with_weights(2.0 * beta, 1.0);
    }
    const double alpha = params.lambda / (2.0 * beta);
    const ImagePlane mu_x = shrink(grad_x(u), alpha);
    const ImagePlane mu_y = shrink(grad_y(u), alpha);
    u = solve_ls(plan, f, mu_x, mu_y);
    if (!u.is_finite()) {
      throw NumericalError("non-finite splitting result at iteration " + std::to_string(n));
    }
  }
  return u;
}

MultiImage hqs_smooth(const MultiImage& img, const HqsParams& params) {
  if (img.space() == ColorSpace::YUV) throw ParameterError("hqs_smooth expects Gray or RGB input");
  std::vector<ImagePlane> out;
  out.reserve(img.channels().size());
  for (const auto& ch : img.channels()) out.push_back(hqs_smooth_plane(ch, params));
  return MultiImage(std::move(out), img.space());
}

}  // namespace ils
