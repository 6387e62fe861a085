#include "ils/penalty.hpp"

#include <cmath>
#include <sstream>

#include "ils/errors.hpp"

namespace ils {

namespace {

// c slightly below c0 from rounding in caller arithmetic is still accepted.
constexpr double kCurvatureSlack = 1e-12;

constexpr int kMaxBracketSteps = 200;
constexpr int kMaxBisectionSteps = 400;
constexpr double kRootTolerance = 1e-12;

void require_curvature(const PenaltySpec& spec, double c) {
  const double floor = c0(spec);
  if (!(c >= floor * (1.0 - kCurvatureSlack))) {
    std::ostringstream msg;
    msg << "c = " << c << " is below c0 = " << floor
        << "; the quadratic bound would not be convex";
    throw ParameterError(msg.str());
  }
}

}  // namespace

void validate(const PenaltySpec& spec) {
  if (const auto* ch = std::get_if<Charbonnier>(&spec)) {
    if (!(ch->p > 0.0 && ch->p <= 1.0)) throw ParameterError("p must be in (0,1]");
    if (!(ch->eps > 0.0) || !std::isfinite(ch->eps)) throw ParameterError("eps must be > 0");
  } else {
    const double g = std::get<Welsch>(spec).gamma;
    if (!(g > 0.0) || !std::isfinite(g)) throw ParameterError("gamma must be > 0");
  }
}

std::string describe(const PenaltySpec& spec) {
  std::ostringstream s;
  if (const auto* ch = std::get_if<Charbonnier>(&spec)) {
    s << "charbonnier(p=" << ch->p << ", eps=" << ch->eps << ")";
  } else {
    s << "welsch(gamma=" << std::get<Welsch>(spec).gamma << ")";
  }
  return s.str();
}

double phi(const PenaltySpec& spec, double x) {
  validate(spec);
  return detail::PenaltyKernel(spec).phi(x);
}

double phi_prime(const PenaltySpec& spec, double x) {
  validate(spec);
  return detail::PenaltyKernel(spec).phi_prime(x);
}

double edge_stop(const PenaltySpec& spec, double x) {
  validate(spec);
  return detail::PenaltyKernel(spec).edge_stop(x);
}

double c0(const PenaltySpec& spec) {
  validate(spec);
  if (const auto* ch = std::get_if<Charbonnier>(&spec)) {
    return ch->p * std::pow(ch->eps, 0.5 * ch->p - 1.0);
  }
  return 2.0;
}

double mu_update(const PenaltySpec& spec, double c, double x) {
  require_curvature(spec, c);
  return c * x - detail::PenaltyKernel(spec).phi_prime(x);
}

double psi(const PenaltySpec& spec, double c, double mu) {
  require_curvature(spec, c);
  if (!std::isfinite(mu)) throw NumericalError("psi: mu must be finite");
  const detail::PenaltyKernel k(spec);
  auto g_prime = [&](double y) { return c * y - k.phi_prime(y); };

  // g' is strictly increasing; widen a bracket around mu / c until it holds the root.
  double lo = mu / c;
  double hi = lo;
  double step = 1e-3 + std::abs(lo);
  int expand = 0;
  while (g_prime(lo) > mu) {
    lo -= step;
    step *= 2.0;
    if (++expand > kMaxBracketSteps) throw NumericalError("psi: could not bracket g'(y) = mu");
  }
  step = 1e-3 + std::abs(hi);
  expand = 0;
  while (g_prime(hi) < mu) {
    hi += step;
    step *= 2.0;
    if (++expand > kMaxBracketSteps) throw NumericalError("psi: could not bracket g'(y) = mu");
  }

  int iter = 0;
  while (hi - lo > kRootTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at double resolution
    if (g_prime(mid) < mu) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (++iter > kMaxBisectionSteps) throw NumericalError("psi: bisection did not converge");
  }
  const double y = 0.5 * (lo + hi);
  const double g = 0.5 * c * y * y - k.phi(y);
  return -mu * mu / (2.0 * c) - g + mu * y;
}

double bound(const PenaltySpec& spec, double c, double x, double mu) {
  const double r = std::sqrt(c) * x - mu / std::sqrt(c);
  return 0.5 * r * r + psi(spec, c, mu);
}

double soft_threshold(double x, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("soft_threshold: alpha must be > 0");
  if (std::abs(x) <= alpha) return 0.0;
  return x > 0.0 ? x - alpha : x + alpha;
}

double huber(double x, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("huber: alpha must be > 0");
  const double ax = std::abs(x);
  if (ax <= alpha) return x * x / (2.0 * alpha);
  return ax - 0.5 * alpha;
}

}  // namespace ils
