#pragma once

// The autonomous circular problem  x'' + f(x) = 0,  f(x) = x / (x^2 + r0^2)^(3/2).
//
// Energies use the shifted convention H(x, v) = v^2/2 - 1/sqrt(x^2 + r0^2), so
// closed orbits have h in (-2, 0) and the origin sits at h = -2.

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "sitnikov/kepler.hpp"
#include "sitnikov/ode.hpp"

namespace sitnikov::circular {

using ode::IntegratorConfig;
using ode::PhaseState;

/// Infimum of the period function, reached as h -> -2.
inline const double kMinPeriod = 2.0 * std::numbers::pi / std::sqrt(8.0);
/// Supremum of the initial velocity of bounded odd orbits.
inline constexpr double kMaxVelocity = 2.0;

template <typename Scalar>
Scalar force(Scalar x) {
  using std::sqrt;
  const Scalar s = x * x + Scalar(kPrimaryRadius * kPrimaryRadius);
  return x / (s * sqrt(s));
}

/// f'(x), the Hill potential along an orbit.
template <typename Scalar>
Scalar stiffness(Scalar x) {
  using std::sqrt;
  const Scalar r2 = Scalar(kPrimaryRadius * kPrimaryRadius);
  const Scalar s = x * x + r2;
  return (r2 - 2 * x * x) / (s * s * sqrt(s));
}

/// E(x) = 2 - 1/sqrt(x^2 + r0^2), the integral of f from 0.
template <typename Scalar>
Scalar potential(Scalar x) {
  using std::sqrt;
  return Scalar(2) - 1 / sqrt(x * x + Scalar(kPrimaryRadius * kPrimaryRadius));
}

template <typename Scalar>
Scalar hamiltonian(Scalar x, Scalar v) {
  return v * v / 2 + potential(x) - Scalar(2);
}

/// (x, v)' for the integrator.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> field(Scalar /*t*/, const Eigen::Matrix<Scalar, 2, 1>& y) {
  return {y[1], -force(y[0])};
}

Eigen::Vector2d field_circular(const PhaseState<double>& state);

double velocity_for_energy(double h);
double amplitude_for_energy(double h);
double energy_for_velocity(double eta);
double energy_for_amplitude(double xi);

/// Integers (m, p) labelling a 2m*pi-periodic orbit with 2p zeros per period.
struct FrequencyPair {
  int m = 1;
  int p = 1;

  /// floor(sqrt(8) m), the largest admissible p.
  static int max_p(int m);
  double rho() const { return static_cast<double>(p) / m; }
  bool admissible() const { return m >= 1 && p >= 1 && p <= max_p(m); }
  /// Throws InadmissibleFrequency.
  void validate() const;
  /// Minimal period 2m*pi/p of the autonomous orbit.
  double autonomous_period() const { return 2.0 * std::numbers::pi * m / p; }
  /// Whether m/(2p) is a positive integer, the only case with a nonzero slope.
  bool resonant() const { return m % (2 * p) == 0; }
  friend bool operator==(const FrequencyPair&, const FrequencyPair&) = default;
};

/// One energy level of the circular problem.
struct CircularOrbit {
  double h = 0;
  double eta = 0;     // S(0) = (0, eta)
  double xi = 0;      // C(0) = (xi, 0)
  double T = 0;       // minimal period
  double Tprime = 0;  // dT/dh
};

CircularOrbit orbit_at_energy(double h, const IntegratorConfig& cfg = {});
CircularOrbit orbit_for_period(double period_target, const IntegratorConfig& cfg = {});

/// S(t, eta): the solution with (x, v)(0) = (0, eta).
PhaseState<double> odd_solution(double eta, double t, const IntegratorConfig& cfg = {});
std::vector<PhaseState<double>> odd_solution(double eta, std::span<const double> times,
                                             const IntegratorConfig& cfg = {});

/// C(t, xi): the solution with (x, v)(0) = (xi, 0).
PhaseState<double> even_solution(double xi, double t, const IntegratorConfig& cfg = {});
std::vector<PhaseState<double>> even_solution(double xi, std::span<const double> times,
                                              const IntegratorConfig& cfg = {});

/// Minimal period T(h), four times the first turning time of S.
double period(double h, const IntegratorConfig& cfg = {});

/// T'(h) by a centered difference of period().
double period_derivative(double h, const IntegratorConfig& cfg = {});

/// Energy whose orbit has minimal period `period_target`.
double solve_energy_for_period(double period_target, const IntegratorConfig& cfg = {});

void check_energy(double h);
void check_velocity(double eta);

}  // namespace sitnikov::circular
