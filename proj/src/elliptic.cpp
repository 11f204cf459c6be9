#include "sitnikov/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sitnikov::elliptic {
namespace {

using Vec2 = Eigen::Vector2d;
using std::numbers::pi;

Vec2 start_point(Parity parity, double param) { return parity == Parity::Odd ? Vec2(0.0, param) : Vec2(param, 0.0); }

void check_param(Parity parity, double param, int iteration) {
  const bool ok = parity == Parity::Odd ? param > 0.0 && param < circular::kMaxVelocity : param > 0.0;
  if (!ok)
    throw NewtonDiverged("shooting parameter left its range (" + std::to_string(param) + ") at iteration " +
                         std::to_string(iteration));
}

ContinuationPoint shoot_impl(FrequencyPair mp, Parity parity, double e, double guess, const IntegratorConfig& cfg) {
  mp.validate();
  kepler::check_eccentricity(e);
  const double half = pi * mp.m;
  const double full = 2.0 * half;

  double param = guess;
  check_param(parity, param, 0);
  for (int it = 1; it <= kMaxNewtonIterations; ++it) {
    const Vec2 y0 = start_point(parity, param);
    const auto sys = orbit_system(e, y0[0], y0[1], full);
    const auto flow = hill::propagate(sys, half, cfg);
    // Odd: x(m pi) with dx/deta = psi2. Even: x'(m pi) with dx'/dxi = psi1'.
    const double residual = parity == Parity::Odd ? flow.x : flow.v;
    if (std::abs(residual) <= kShootTolerance) {
      ContinuationPoint pt;
      pt.e = e;
      pt.mp = mp;
      pt.parity = parity;
      pt.shoot_param = param;
      pt.residual = std::abs(residual);
      pt.newton_iterations = it - 1;
      pt.monodromy = hill::fundamental_solutions(sys, full, cfg);
      pt.tau = pt.monodromy.trace();
      pt.cls = hill::classify(pt.monodromy);
      return pt;
    }
    const double slope = parity == Parity::Odd ? flow.psi(0, 1) : flow.psi(1, 0);
    if (!(std::abs(slope) > 0.0) || !std::isfinite(slope))
      throw NewtonDiverged("singular shooting derivative at iteration " + std::to_string(it));
    param -= residual / slope;
    check_param(parity, param, it);
  }
  throw NewtonDiverged("shooting did not converge in " + std::to_string(kMaxNewtonIterations) + " iterations");
}

}  // namespace

Eigen::Vector2d field_elliptic(const PhaseState<double>& state, double e) {
  kepler::check_eccentricity(e);
  return field(state.t, Vec2(state.x, state.v), e);
}

hill::HillSystem orbit_system(double e, double x0, double v0, double period) {
  kepler::check_eccentricity(e);
  return hill::HillSystem::along_orbit([e](double t, double x) { return force(x, t, e); },
                                       [e](double t, double x) { return dFdx(x, t, e); }, x0, v0, period);
}

ContinuationPoint shoot_odd(FrequencyPair mp, double e, double eta_guess, const IntegratorConfig& cfg) {
  return shoot_impl(mp, Parity::Odd, e, eta_guess, cfg);
}

ContinuationPoint shoot_even(FrequencyPair mp, double e, double xi_guess, const IntegratorConfig& cfg) {
  return shoot_impl(mp, Parity::Even, e, xi_guess, cfg);
}

ContinuationPoint shoot(FrequencyPair mp, Parity parity, double e, double guess, const IntegratorConfig& cfg) {
  return shoot_impl(mp, parity, e, guess, cfg);
}

double initial_guess(FrequencyPair mp, Parity parity, const IntegratorConfig& cfg) {
  mp.validate();
  const double h = circular::solve_energy_for_period(mp.autonomous_period(), cfg);
  return parity == Parity::Odd ? circular::velocity_for_energy(h) : circular::amplitude_for_energy(h);
}

FamilyTrace trace_along_family(FrequencyPair mp, Parity parity, std::span<const double> e_list,
                               const IntegratorConfig& cfg) {
  mp.validate();
  if (e_list.empty() || e_list.front() != 0.0) throw PreconditionViolated("eccentricity list must start at 0");
  if (!std::is_sorted(e_list.begin(), e_list.end()))
    throw PreconditionViolated("eccentricity list must be ascending");
  for (const double e : e_list) kepler::check_eccentricity(e);

  FamilyTrace out;
  double guess = initial_guess(mp, parity, cfg);
  double prev_e = 0.0;
  for (const double e : e_list) {
    try {
      out.points.push_back(shoot_impl(mp, parity, e, guess, cfg));
    } catch (const NumericalFailure& first) {
      try {
        if (out.points.empty()) throw;
        const auto mid = shoot_impl(mp, parity, (prev_e + e) / 2.0, guess, cfg);
        out.points.push_back(shoot_impl(mp, parity, e, mid.shoot_param, cfg));
      } catch (const NumericalFailure&) {
        out.failed_at = e;
        out.failure = first.what();
        return out;
      }
    }
    guess = out.points.back().shoot_param;
    prev_e = e;
  }
  return out;
}

std::vector<PhaseState<double>> shot_orbit(const ContinuationPoint& point, std::span<const double> times,
                                           const IntegratorConfig& cfg) {
  const double e = point.e;
  kepler::check_eccentricity(e);
  const auto rhs = [e](double t, const Vec2& y) -> Vec2 { return field(t, y, e); };
  const auto ys = ode::sample_trajectory<Vec2>(rhs, start_point(point.parity, point.shoot_param), 0.0, times, cfg);
  std::vector<PhaseState<double>> out;
  out.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) out.push_back({times[i], ys[i][0], ys[i][1]});
  return out;
}

FiniteDifferenceSlope finite_difference_slope(FrequencyPair mp, Parity parity, double e0,
                                              const IntegratorConfig& cfg) {
  if (!(e0 > 0.0 && e0 < 1.0)) throw PreconditionViolated("finite-difference step must lie in (0, 1)");
  const double es[] = {0.0, e0 / 4.0, e0 / 2.0, e0};
  const auto family = trace_along_family(mp, parity, es, cfg);
  if (family.failed_at)
    throw NewtonDiverged("continuation failed at e = " + std::to_string(*family.failed_at) + ": " + family.failure);

  FiniteDifferenceSlope fd;
  fd.mp = mp;
  fd.parity = parity;
  for (int i = 3; i >= 1; --i) {
    const auto& pt = family.points[i];
    fd.e.push_back(pt.e);
    fd.tau.push_back(pt.tau);
    fd.quotient.push_back((pt.tau - 2.0) / pt.e);
  }
  const double r_coarse = 2.0 * fd.quotient[1] - fd.quotient[0];
  const double r_fine = 2.0 * fd.quotient[2] - fd.quotient[1];
  fd.richardson = (4.0 * r_fine - r_coarse) / 3.0;
  return fd;
}

}  // namespace sitnikov::elliptic
