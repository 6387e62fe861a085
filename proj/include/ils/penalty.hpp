#pragma once

#include <cmath>
#include <string>
#include <variant>

namespace ils {

inline constexpr double kDefaultEpsilon = 1e-4;

/// Generalized Charbonnier penalty (x^2 + eps)^(p/2), 0 < p <= 1, eps > 0.
struct Charbonnier {
  double p = 0.8;
  double eps = kDefaultEpsilon;
};

/// Welsch penalty 2 gamma^2 (1 - exp(-x^2 / (2 gamma^2))), gamma > 0.
struct Welsch {
  double gamma = 10.0 / 255.0;
};

using PenaltySpec = std::variant<Charbonnier, Welsch>;

/// Throws ParameterError when the spec is outside its valid range.
void validate(const PenaltySpec& spec);

std::string describe(const PenaltySpec& spec);

double phi(const PenaltySpec& spec, double x);
double phi_prime(const PenaltySpec& spec, double x);

/// phi'(x) / (2x), evaluated in closed form so that x = 0 gives the limit.
double edge_stop(const PenaltySpec& spec, double x);

/// Smallest curvature c for which g(x) = c/2 x^2 - phi(x) is convex:
/// p * eps^(p/2 - 1) for Charbonnier, 2 for Welsch.
double c0(const PenaltySpec& spec);

/// Optimal auxiliary variable of the quadratic bound, c x - phi'(x).
/// Requires c >= c0(spec).
double mu_update(const PenaltySpec& spec, double c, double x);

/// Conjugate-like term psi(mu) of the additive half-quadratic bound
///   phi(x) = min_mu { 1/2 (sqrt(c) x - mu / sqrt(c))^2 + psi(mu) }.
/// Evaluated by inverting g'(y) = c y - phi'(y) with bisection; this is a
/// verification oracle and is never used by the smoother itself.
double psi(const PenaltySpec& spec, double c, double mu);

/// Value of the quadratic bound at (x, mu): 1/2 (sqrt(c) x - mu/sqrt(c))^2 + psi(mu).
double bound(const PenaltySpec& spec, double c, double x, double mu);

/// argmin_mu (x - mu)^2 / (2 alpha) + |mu|.
double soft_threshold(double x, double alpha);

/// Huber function with threshold alpha: the minimum value attained by soft_threshold.
double huber(double x, double alpha);

namespace detail {

// Unchecked per-pixel kernels for the inner loops. Construct from a
// validated spec only.
class PenaltyKernel {
 public:
  explicit PenaltyKernel(const PenaltySpec& spec) {
    if (const auto* ch = std::get_if<Charbonnier>(&spec)) {
      welsch_ = false;
      p_ = ch->p;
      eps_ = ch->eps;
      half_p_ = 0.5 * ch->p;
    } else {
      welsch_ = true;
      const double g = std::get<Welsch>(spec).gamma;
      two_gamma_sq_ = 2.0 * g * g;
      inv_two_gamma_sq_ = 1.0 / two_gamma_sq_;
    }
  }

  double phi(double x) const {
    if (welsch_) return two_gamma_sq_ * (1.0 - std::exp(-x * x * inv_two_gamma_sq_));
    return std::pow(x * x + eps_, half_p_);
  }

  double phi_prime(double x) const {
    if (welsch_) return 2.0 * x * std::exp(-x * x * inv_two_gamma_sq_);
    return p_ * x * std::pow(x * x + eps_, half_p_ - 1.0);
  }

  double edge_stop(double x) const {
    if (welsch_) return std::exp(-x * x * inv_two_gamma_sq_);
    return half_p_ * std::pow(x * x + eps_, half_p_ - 1.0);
  }

 private:
  bool welsch_ = false;
  double p_ = 0.0;
  double eps_ = 0.0;
  double half_p_ = 0.0;
  double two_gamma_sq_ = 0.0;
  double inv_two_gamma_sq_ = 0.0;
};

}  // namespace detail

}  // namespace ils
