#pragma once

// The full problem for 0 <= e < 1:
//   x'' + F(x, t, e) = 0,  F = x / (x^2 + r(t, e)^2)^(3/2),
// with r the Kepler separation of the primaries.

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sitnikov/circular.hpp"
#include "sitnikov/hill.hpp"
#include "sitnikov/kepler.hpp"
#include "sitnikov/slope.hpp"

namespace sitnikov::elliptic {

using circular::FrequencyPair;
using ode::IntegratorConfig;
using ode::PhaseState;
using slope::Parity;

template <typename Scalar>
Scalar force(Scalar x, Scalar t, Scalar e) {
  using std::sqrt;
  const Scalar r = kepler::radius(t, e);
  const Scalar s = x * x + r * r;
  return x / (s * sqrt(s));
}

/// dF/dx = (r^2 - 2x^2) / (x^2 + r^2)^(5/2).
template <typename Scalar>
Scalar dFdx(Scalar x, Scalar t, Scalar e) {
  using std::sqrt;
  const Scalar r = kepler::radius(t, e);
  const Scalar r2 = r * r;
  const Scalar s = x * x + r2;
  return (r2 - 2 * x * x) / (s * s * sqrt(s));
}

/// d^2F/(dt de) at e = 0: -3 x sin t / (4 (x^2 + r0^2)^(5/2)).
template <typename Scalar>
Scalar F_te_at_zero(Scalar x, Scalar t) {
  using std::sin;
  using std::sqrt;
  const Scalar s = x * x + Scalar(kPrimaryRadius * kPrimaryRadius);
  return -3 * x * sin(t) / (4 * s * s * sqrt(s));
}

/// (x, v)' for the integrator.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> field(Scalar t, const Eigen::Matrix<Scalar, 2, 1>& y, Scalar e) {
  return {y[1], -force(y[0], t, e)};
}

/// Throws EccentricityOutOfRange.
Eigen::Vector2d field_elliptic(const PhaseState<double>& state, double e);

inline constexpr int kMaxNewtonIterations = 25;
inline constexpr double kShootTolerance = 1e-10;

struct ContinuationPoint {
  double e = 0.0;
  FrequencyPair mp;
  Parity parity = Parity::Odd;
  double shoot_param = 0.0;  // eta(e) for odd, xi(e) for even
  double residual = 0.0;     // |x(m pi)| or |x'(m pi)|
  int newton_iterations = 0;
  hill::Monodromy2x2 monodromy;  // over [0, 2m pi]
  double tau = 0.0;
  hill::StabilityClass cls = hill::StabilityClass::ParabolicUndetermined;
};

/// Linearization along the orbit starting at (x0, v0) for eccentricity e.
hill::HillSystem orbit_system(double e, double x0, double v0, double period);

/// Newton on eta -> x(m pi; eta, e), orbit starting at (0, eta).
ContinuationPoint shoot_odd(FrequencyPair mp, double e, double eta_guess, const IntegratorConfig& cfg = {});
/// Newton on xi -> x'(m pi; xi, e), orbit starting at (xi, 0).
ContinuationPoint shoot_even(FrequencyPair mp, double e, double xi_guess, const IntegratorConfig& cfg = {});
ContinuationPoint shoot(FrequencyPair mp, Parity parity, double e, double guess, const IntegratorConfig& cfg = {});

/// The e = 0 shooting parameter: eta or xi of the circular (m, p) orbit.
double initial_guess(FrequencyPair mp, Parity parity, const IntegratorConfig& cfg = {});

struct FamilyTrace {
  std::vector<ContinuationPoint> points;
  std::optional<double> failed_at;  // first e where Newton gave up
  std::string failure;
};

/// Continuation over ascending e_list starting at 0. A failing step is retried
/// once through its midpoint before the trace stops.
FamilyTrace trace_along_family(FrequencyPair mp, Parity parity, std::span<const double> e_list,
                               const IntegratorConfig& cfg = {});

/// States of the shot orbit at arbitrary (possibly negative) times.
std::vector<PhaseState<double>> shot_orbit(const ContinuationPoint& point, std::span<const double> times,
                                           const IntegratorConfig& cfg = {});

struct FiniteDifferenceSlope {
  FrequencyPair mp;
  Parity parity = Parity::Odd;
  std::vector<double> e;         // e0, e0/2, e0/4
  std::vector<double> tau;
  std::vector<double> quotient;  // (tau(e) - 2) / e
  double richardson = 0.0;       // two Richardson levels
};

/// Richardson-extrapolated (tau(e) - 2)/e over e0, e0/2, e0/4.
FiniteDifferenceSlope finite_difference_slope(FrequencyPair mp, Parity parity, double e0 = 1e-2,
                                              const IntegratorConfig& cfg = {});

}  // namespace sitnikov::elliptic
