// SPDX-License-Identifier: Apache-2.0
#include "needle_lab/quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "needle_lab/core.hpp"

namespace needle_lab {

namespace {

constexpr double kDomainSlack = 1e-12;

void check_domain(double lo, double hi, double t) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(t)) {
    throw Error(ErrorCode::DomainError, "integration bounds and t must be finite");
  }
  if (lo > hi) throw Error(ErrorCode::DomainError, "integration bounds reversed");
  if (lo < -kDomainSlack || hi > std::numbers::pi / 2 + kDomainSlack) {
    throw Error(ErrorCode::DomainError, "integration bounds outside [0, pi/2]");
  }
  if (t < 0.0 || t > 1.0) throw Error(ErrorCode::DomainError, "t outside [0, 1]");
  if (std::sin(lo) < t - kDomainSlack) {
    throw Error(ErrorCode::DomainError, "sin(lo) < t: integrand is not real on the interval");
  }
}

}  // namespace

void QuadratureSettings::validate() const {
  if (n_unit < 1) throw Error(ErrorCode::InvalidArgument, "n_unit must be >= 1");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
  if (max_refinements < 1) throw Error(ErrorCode::InvalidArgument, "max_refinements must be >= 1");
}

long simpson_intervals(double lo, double hi, int n_unit, int pass) {
  auto n = static_cast<long>(std::ceil((hi - lo) * n_unit * 2.0 * pass));
  n = std::max(n, 2L);
  return n + (n % 2);
}

void throw_no_convergence(int max_refinements) {
  throw Error(ErrorCode::NoConvergence, "Simpson refinement did not settle within " +
                                            std::to_string(max_refinements) + " passes");
}

double integrand_F(double psi, double t) {
  const double s = std::sin(psi);
  return std::sqrt(std::max(s * s - t * t, 0.0));
}

double integrand_G(double psi, double t) {
  const double s = std::sin(psi);
  // psi == 0 is only in the domain when t == 0, where the integrand is pi/2
  if (s <= 0.0) return t == 0.0 ? std::numbers::pi / 2 : 0.0;
  return std::numbers::pi / 2 - std::asin(std::clamp(t / s, -1.0, 1.0));
}

double integral_F(double lo, double hi, double t, const QuadratureSettings& settings) {
  check_domain(lo, hi, t);
  return refined_simpson([t](double psi) { return integrand_F(psi, t); }, lo, hi, settings);
}

double integral_G(double lo, double hi, double t, const QuadratureSettings& settings) {
  check_domain(lo, hi, t);
  return refined_simpson([t](double psi) { return integrand_G(psi, t); }, lo, hi, settings);
}

}  // namespace needle_lab
