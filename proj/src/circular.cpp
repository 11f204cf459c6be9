#include "sitnikov/circular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

namespace sitnikov::circular {
namespace {

using Vec2 = Eigen::Vector2d;

constexpr auto kField = [](double t, const Vec2& y) -> Vec2 { return field(t, y); };

std::vector<PhaseState<double>> sample(const Vec2& y0, std::span<const double> times, const IntegratorConfig& cfg) {
  const auto ys = ode::sample_trajectory<Vec2>(kField, y0, 0.0, times, cfg);
  std::vector<PhaseState<double>> out;
  out.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) out.push_back({times[i], ys[i][0], ys[i][1]});
  return out;
}

}  // namespace

void check_energy(double h) {
  if (!(h > -2.0 && h < 0.0))
    throw EnergyOutOfRange("energy must lie in (-2, 0), got " + std::to_string(h));
}

void check_velocity(double eta) {
  if (!(eta > 0.0 && eta < kMaxVelocity))
    throw VelocityOutOfRange("initial velocity must lie in (0, 2), got " + std::to_string(eta));
}

Eigen::Vector2d field_circular(const PhaseState<double>& state) { return {state.v, -force(state.x)}; }

double velocity_for_energy(double h) {
  check_energy(h);
  return std::sqrt(2.0 * (h + 2.0));
}

double amplitude_for_energy(double h) {
  check_energy(h);
  return std::sqrt(1.0 / (h * h) - kPrimaryRadius * kPrimaryRadius);
}

double energy_for_velocity(double eta) { return eta * eta / 2.0 - 2.0; }

double energy_for_amplitude(double xi) { return -1.0 / std::sqrt(xi * xi + kPrimaryRadius * kPrimaryRadius); }

int FrequencyPair::max_p(int m) { return static_cast<int>(std::floor(std::sqrt(8.0) * m)); }

void FrequencyPair::validate() const {
  if (!admissible())
    throw InadmissibleFrequency("frequency (m, p) = (" + std::to_string(m) + ", " + std::to_string(p) +
                                ") violates 1 <= p <= floor(sqrt(8) m)");
}

PhaseState<double> odd_solution(double eta, double t, const IntegratorConfig& cfg) {
  check_velocity(eta);
  const Vec2 y = ode::integrate<Vec2>(kField, Vec2(0.0, eta), 0.0, t, cfg);
  return {t, y[0], y[1]};
}

std::vector<PhaseState<double>> odd_solution(double eta, std::span<const double> times, const IntegratorConfig& cfg) {
  check_velocity(eta);
  return sample(Vec2(0.0, eta), times, cfg);
}

PhaseState<double> even_solution(double xi, double t, const IntegratorConfig& cfg) {
  if (!(xi > 0.0)) throw PreconditionViolated("initial amplitude must be positive");
  const Vec2 y = ode::integrate<Vec2>(kField, Vec2(xi, 0.0), 0.0, t, cfg);
  return {t, y[0], y[1]};
}

std::vector<PhaseState<double>> even_solution(double xi, std::span<const double> times,
                                              const IntegratorConfig& cfg) {
  if (!(xi > 0.0)) throw PreconditionViolated("initial amplitude must be positive");
  return sample(Vec2(xi, 0.0), times, cfg);
}

double period(double h, const IntegratorConfig& cfg) {
  const double eta = velocity_for_energy(h);
  const auto turning = ode::EventSpec<Vec2>::first([](double, const Vec2& y) { return y[1]; }, ode::Direction::Falling);
  const auto hit = ode::integrate_to_event<Vec2>(kField, Vec2(0.0, eta), 0.0, turning, cfg);
  return 4.0 * hit.t;
}

double period_derivative(double h, const IntegratorConfig& cfg) {
  check_energy(h);
  double delta = 1e-6 * std::max(1.0, std::abs(h));
  delta = std::min({delta, (h + 2.0) / 2.0, -h / 2.0});
  return (period(h + delta, cfg) - period(h - delta, cfg)) / (2.0 * delta);
}

double solve_energy_for_period(double period_target, const IntegratorConfig& cfg) {
  if (!(period_target > kMinPeriod) || !std::isfinite(period_target))
    throw PeriodNotAttainable("period " + std::to_string(period_target) + " is not above the infimum 2*pi/sqrt(8)");

  const auto residual = [&](double h) { return period(h, cfg) - period_target; };

  double lo = -1.999;
  double r_lo = residual(lo);
  while (r_lo >= 0.0) {
    if (lo + 2.0 < 1e-13) throw PeriodNotAttainable("period too close to the infimum to bracket");
    lo = -2.0 + (lo + 2.0) / 16.0;
    r_lo = residual(lo);
  }
  double hi = -0.5;
  double r_hi = residual(hi);
  while (r_hi <= 0.0) {
    if (hi > -1e-12) throw PeriodNotAttainable("period too large to bracket");
    lo = hi;
    r_lo = r_hi;
    hi /= 4.0;
    r_hi = residual(hi);
  }

  std::uintmax_t iters = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(std::abs(a), std::abs(b)); };
  const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, r_lo, r_hi, tol, iters);
  return (a + b) / 2.0;
}

CircularOrbit orbit_at_energy(double h, const IntegratorConfig& cfg) {
  CircularOrbit orbit;
  orbit.h = h;
  orbit.eta = velocity_for_energy(h);
  orbit.xi = amplitude_for_energy(h);
  orbit.T = period(h, cfg);
  orbit.Tprime = period_derivative(h, cfg);
  return orbit;
}

CircularOrbit orbit_for_period(double period_target, const IntegratorConfig& cfg) {
  return orbit_at_energy(solve_energy_for_period(period_target, cfg), cfg);
}

}  // namespace sitnikov::circular
