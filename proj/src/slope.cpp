#include "sitnikov/slope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sitnikov/elliptic.hpp"
#include "sitnikov/parallel.hpp"

namespace sitnikov::slope {
namespace {

using Vec2 = Eigen::Vector2d;
using std::numbers::pi;

constexpr auto kField = [](double t, const Vec2& y) -> Vec2 { return circular::field(t, y); };

double G_of(double x) {
  const double s = x * x + kPrimaryRadius * kPrimaryRadius;
  return 1.0 / (s * std::sqrt(s));
}

// int_0^t_end of G cos t and F_te * phi' along the orbit from y0.
Eigen::Vector2d slope_integrals(const Vec2& y0, double t_end, const IntegratorConfig& cfg) {
  const auto integrand = [](double t, const Vec2& y) {
    return Eigen::Vector2d(G_of(y[0]) * std::cos(t), elliptic::F_te_at_zero(y[0], t) * y[1]);
  };
  return ode::integrate_with_quadratures<2>(kField, y0, integrand, 0.0, t_end, cfg).integrals;
}

double G_cos_integral(const Vec2& y0, double t_end, const IntegratorConfig& cfg) {
  const auto integrand = [](double t, const Vec2& y) { return G_of(y[0]) * std::cos(t); };
  return ode::integrate_with_quadrature<Vec2>(kField, y0, integrand, 0.0, t_end, cfg).integral;
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

std::string_view to_string(Parity parity) { return parity == Parity::Odd ? "odd" : "even"; }

Parity parse_parity(std::string_view text) {
  if (text == "odd") return Parity::Odd;
  if (text == "even") return Parity::Even;
  throw PreconditionViolated("parity must be 'odd' or 'even', got '" + std::string(text) + "'");
}

double SlopeReport::form_rel_residual() const { return relative_gap(tau_prime, tau_prime_raw); }

hill::StabilityClass verdict_for_slope(double tau_prime, double tol) {
  if (tau_prime > tol) return hill::StabilityClass::Hyperbolic;
  if (tau_prime < -tol) return hill::StabilityClass::Elliptic;
  return hill::StabilityClass::ParabolicUndetermined;
}

Eigen::Vector2d initial_point(const circular::CircularOrbit& orbit, Parity parity) {
  return parity == Parity::Odd ? Vec2(0.0, orbit.eta) : Vec2(orbit.xi, 0.0);
}

double G_along_orbit(Parity parity, FrequencyPair mp, double t, const IntegratorConfig& cfg) {
  return G_along_orbit(parity, mp, std::span<const double>(&t, 1), cfg).front();
}

std::vector<double> G_along_orbit(Parity parity, FrequencyPair mp, std::span<const double> times,
                                  const IntegratorConfig& cfg) {
  mp.validate();
  const double h = circular::solve_energy_for_period(mp.autonomous_period(), cfg);
  const Vec2 y0 = parity == Parity::Odd ? Vec2(0.0, circular::velocity_for_energy(h))
                                        : Vec2(circular::amplitude_for_energy(h), 0.0);
  const auto ys = ode::sample_trajectory<Vec2>(kField, y0, 0.0, times, cfg);
  std::vector<double> out;
  out.reserve(ys.size());
  for (const auto& y : ys) out.push_back(G_of(y[0]));
  return out;
}

SlopeReport slope(FrequencyPair mp, Parity parity, const IntegratorConfig& cfg) {
  mp.validate();
  const auto orbit = circular::orbit_for_period(mp.autonomous_period(), cfg);
  const Eigen::Vector2d q = slope_integrals(initial_point(orbit, parity), 2.0 * pi * mp.m, cfg);

  SlopeReport rep;
  rep.mp = mp;
  rep.parity = parity;
  rep.h = orbit.h;
  rep.eta = orbit.eta;
  rep.xi = orbit.xi;
  rep.Tprime = orbit.Tprime;
  rep.integral_Gcos = q[0];
  rep.integral_Fte_phidot = q[1];
  rep.tau_prime = 0.25 * mp.p * orbit.Tprime * q[0];
  rep.tau_prime_raw = -mp.p * orbit.Tprime * q[1];
  if (mp.resonant()) rep.A_n = q[0] / (4.0 * mp.p);
  rep.verdict = verdict_for_slope(rep.tau_prime);
  return rep;
}

SlopeReport slope_odd(FrequencyPair mp, const IntegratorConfig& cfg) { return slope(mp, Parity::Odd, cfg); }

SlopeReport slope_even(FrequencyPair mp, const IntegratorConfig& cfg) { return slope(mp, Parity::Even, cfg); }

AnReport compute_An_at(int n, double h, const IntegratorConfig& cfg) {
  if (n < 1) throw PreconditionViolated("A_n needs n >= 1");
  const Vec2 y0(0.0, circular::velocity_for_energy(h));
  AnReport rep;
  rep.n = n;
  rep.h = h;
  rep.eta = y0[1];
  rep.A_n = G_cos_integral(y0, n * pi, cfg);
  rep.half_full = 0.5 * G_cos_integral(y0, 2.0 * n * pi, cfg);
  rep.residual = std::abs(rep.A_n - rep.half_full);
  return rep;
}

AnReport compute_An(int n, const IntegratorConfig& cfg) {
  if (n < 1) throw PreconditionViolated("A_n needs n >= 1");
  return compute_An_at(n, circular::solve_energy_for_period(4.0 * pi * n, cfg), cfg);
}

VanishingReport vanishing_check(FrequencyPair mp, Parity parity, const IntegratorConfig& cfg) {
  mp.validate();
  if (mp.resonant())
    throw PreconditionViolated("(m, p) = (" + std::to_string(mp.m) + ", " + std::to_string(mp.p) +
                               ") is resonant: m/(2p) is an integer");
  const auto rep = slope(mp, parity, cfg);
  VanishingReport out;
  out.mp = mp;
  out.parity = parity;
  out.tau_prime = rep.tau_prime;
  out.residual = std::abs(rep.tau_prime);
  out.vanishes = out.residual <= kVanishingTolerance;
  out.explanation = "G has period m*pi/p = " + std::to_string(mp.m) + "*pi/" + std::to_string(mp.p) +
                    "; cos t is orthogonal to every harmonic of that period unless m/(2p) is an integer";
  return out;
}

ParityRelation parity_relation_check(int n, int p, const IntegratorConfig& cfg) {
  if (n < 1 || p < 1) throw PreconditionViolated("parity relation needs n, p >= 1");
  const FrequencyPair mp{2 * p * n, p};
  ParityRelation rel;
  rel.n = n;
  rel.p = p;
  rel.odd_slope = slope_odd(mp, cfg).tau_prime;
  rel.even_slope = slope_even(mp, cfg).tau_prime;
  rel.lhs = rel.even_slope;
  rel.rhs = (n % 2 == 0 ? 1.0 : -1.0) * rel.odd_slope;
  rel.rel_residual = relative_gap(rel.lhs, rel.rhs);
  return rel;
}

std::vector<ScanRow> conjecture_scan(int n_max, const IntegratorConfig& cfg, unsigned threads) {
  if (n_max < 1) throw PreconditionViolated("scan needs n_max >= 1");
  const IntegratorConfig loose = cfg.scaled(16.0);
  return parallel_map(
      static_cast<std::size_t>(n_max),
      [&](std::size_t i) {
        const int n = static_cast<int>(i) + 1;
        const auto fine = compute_An(n, cfg);
        const auto coarse = compute_An(n, loose);
        ScanRow row;
        row.n = n;
        row.eta = fine.eta;
        row.h = fine.h;
        row.A_n = fine.A_n;
        row.A_n_loose = coarse.A_n;
        row.certificate = std::abs(fine.A_n - coarse.A_n);
        row.certified = row.certificate <= 1e-6;
        row.positive = row.A_n > 0.0;
        return row;
      },
      threads);
}

}  // namespace sitnikov::slope
