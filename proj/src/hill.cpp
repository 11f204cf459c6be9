#include "sitnikov/hill.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sitnikov/circular.hpp"

namespace sitnikov::hill {
namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// (x, v, psi1, psi1', psi2, psi2')
struct JointField {
  const HillSystem* sys;
  Vec6 operator()(double t, const Vec6& y) const {
    const double q = sys->stiffness(t, y[0]);
    Vec6 dy;
    dy << y[1], sys->force ? -sys->force(t, y[0]) : 0.0, y[3], -q * y[2], y[5], -q * y[4];
    return dy;
  }
};

Vec6 initial_state(const HillSystem& sys) {
  Vec6 y0;
  y0 << sys.x0, sys.force ? sys.v0 : 0.0, 1.0, 0.0, 0.0, 1.0;
  return y0;
}

Flow to_flow(double t, const Vec6& y) {
  Flow f;
  f.t = t;
  f.x = y[0];
  f.v = y[1];
  f.psi << y[2], y[4], y[3], y[5];
  return f;
}

void check_system(const HillSystem& sys) {
  if (!sys.stiffness) throw InvalidConfig("Hill system has no potential");
}

double kernel_value(const Monodromy2x2& P, double psi1, double psi2) {
  return -P.b() * psi1 * psi1 + (P.a() - P.d()) * psi1 * psi2 + P.c() * psi2 * psi2;
}

}  // namespace

std::string_view to_string(StabilityClass cls) {
  switch (cls) {
    case StabilityClass::Elliptic:
      return "Elliptic";
    case StabilityClass::Hyperbolic:
      return "Hyperbolic";
    case StabilityClass::ParabolicStable:
      return "ParabolicStable";
    case StabilityClass::ParabolicUnstable:
      return "ParabolicUnstable";
    case StabilityClass::ParabolicUndetermined:
      return "ParabolicUndetermined";
  }
  return "Unknown";
}

StabilityClass classify(const Monodromy2x2& mono, double tol) {
  if (!(tol >= 0.0)) throw InvalidConfig("classification tolerance must be nonnegative");
  const double det = mono.det();
  if (!(std::abs(det - 1.0) <= 1e-6))
    throw DeterminantViolation("Poincare matrix has determinant " + std::to_string(det));
  const double tr = std::abs(mono.trace());
  if (tr < 2.0 - tol) return StabilityClass::Elliptic;
  if (tr > 2.0 + tol) return StabilityClass::Hyperbolic;

  const double s = mono.trace() > 0 ? 1.0 : -1.0;
  if (std::abs(mono.a() - s) > tol || std::abs(mono.d() - s) > tol) return StabilityClass::ParabolicUndetermined;
  const bool b_on = std::abs(mono.b()) > tol;
  const bool c_on = std::abs(mono.c()) > tol;
  if (!b_on && !c_on) return StabilityClass::ParabolicStable;
  if (b_on != c_on) return StabilityClass::ParabolicUnstable;
  return StabilityClass::ParabolicUndetermined;
}

HillSystem HillSystem::from_potential(std::function<double(double)> q, double period) {
  HillSystem sys;
  sys.period = period;
  sys.stiffness = [q = std::move(q)](double t, double) { return q(t); };
  return sys;
}

HillSystem HillSystem::along_orbit(Coefficient force, Coefficient stiffness, double x0, double v0, double period) {
  HillSystem sys;
  sys.period = period;
  sys.force = std::move(force);
  sys.stiffness = std::move(stiffness);
  sys.x0 = x0;
  sys.v0 = v0;
  return sys;
}

HillSystem HillSystem::perturbed(std::function<double(double)> dq, double scale) const {
  HillSystem out = *this;
  out.stiffness = [base = stiffness, dq = std::move(dq), scale](double t, double x) {
    return base(t, x) + scale * dq(t);
  };
  return out;
}

Flow propagate(const HillSystem& sys, double t_end, const IntegratorConfig& cfg) {
  check_system(sys);
  const Vec6 y = ode::integrate<Vec6>(JointField{&sys}, initial_state(sys), 0.0, t_end, cfg);
  return to_flow(t_end, y);
}

std::vector<Flow> propagate_at(const HillSystem& sys, std::span<const double> times, const IntegratorConfig& cfg) {
  check_system(sys);
  const auto ys = ode::integrate_at<Vec6>(JointField{&sys}, initial_state(sys), 0.0, times, cfg);
  std::vector<Flow> out;
  out.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) out.push_back(to_flow(times[i], ys[i]));
  return out;
}

Monodromy2x2 fundamental_solutions(const HillSystem& sys, double t_end, const IntegratorConfig& cfg) {
  check_system(sys);
  if (!(t_end > 0.0)) throw PreconditionViolated("fundamental solutions need t_end > 0");
  return {propagate(sys, t_end, cfg).psi, t_end};
}

double trace(const HillSystem& sys, const IntegratorConfig& cfg) {
  return fundamental_solutions(sys, sys.period, cfg).trace();
}

double trace_frechet_kernel(const HillSystem& sys, double s, const IntegratorConfig& cfg) {
  if (!(s >= 0.0 && s <= sys.period)) throw PreconditionViolated("kernel argument must lie in [0, T]");
  const auto P = fundamental_solutions(sys, sys.period, cfg);
  const Flow at = s == 0.0 ? Flow{} : propagate(sys, s, cfg);
  return kernel_value(P, at.psi(0, 0), at.psi(0, 1));
}

double trace_derivative(const HillSystem& sys, const std::function<double(double)>& dq, const IntegratorConfig& cfg) {
  const auto P = fundamental_solutions(sys, sys.period, cfg);
  const auto integrand = [&](double t, const Vec6& y) { return kernel_value(P, y[2], y[4]) * dq(t); };
  return ode::integrate_with_quadrature<Vec6>(JointField{&sys}, initial_state(sys), integrand, 0.0, sys.period, cfg)
      .integral;
}

FrechetCheck frechet_directional_check(const HillSystem& sys, const std::function<double(double)>& dq, double eps,
                                       const IntegratorConfig& cfg) {
  if (!(eps > 0.0)) throw PreconditionViolated("perturbation size must be positive");
  FrechetCheck out;
  out.eps = eps;
  out.kernel_integral = trace_derivative(sys, dq, cfg);
  const double tau0 = trace(sys, cfg);
  out.quotient = (trace(sys.perturbed(dq, eps), cfg) - tau0) / eps;
  out.quotient_half = (trace(sys.perturbed(dq, eps / 2.0), cfg) - tau0) / (eps / 2.0);
  out.error = std::abs(out.quotient - out.kernel_integral);
  out.error_half = std::abs(out.quotient_half - out.kernel_integral);
  out.extrapolated_error = std::abs(2.0 * out.quotient_half - out.quotient - out.kernel_integral);
  return out;
}

HillSystem odd_orbit_system(double eta, const IntegratorConfig& cfg) {
  circular::check_velocity(eta);
  const double T = circular::period(circular::energy_for_velocity(eta), cfg);
  return HillSystem::along_orbit([](double, double x) { return circular::force(x); },
                                 [](double, double x) { return circular::stiffness(x); }, 0.0, eta, T);
}

PsiIdentityReport verify_psi_identities(double eta, std::span<const double> times, const IntegratorConfig& cfg) {
  circular::check_velocity(eta);
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
    throw PreconditionViolated("sample times must be nonnegative and ascending");
  const HillSystem sys = odd_orbit_system(eta, cfg);
  const auto flows = propagate_at(sys, times, cfg);
  const auto orbit = circular::odd_solution(eta, times, cfg);

  constexpr double delta = 1e-6;
  const auto plus = circular::odd_solution(eta + delta, times, cfg);
  const auto minus = circular::odd_solution(eta - delta, times, cfg);

  PsiIdentityReport rep;
  rep.eta = eta;
  rep.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& psi = flows[i].psi;
    rep.psi1_residual.push_back(std::abs(psi(0, 0) - orbit[i].v / eta));
    rep.psi1dot_residual.push_back(std::abs(psi(1, 0) + circular::force(orbit[i].x) / eta));
    rep.psi2_residual.push_back(std::abs(psi(0, 1) - (plus[i].x - minus[i].x) / (2.0 * delta)));
  }
  const auto max_of = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
  rep.max_psi1 = max_of(rep.psi1_residual);
  rep.max_psi1dot = max_of(rep.psi1dot_residual);
  rep.max_psi2 = max_of(rep.psi2_residual);
  return rep;
}

HalfPeriodReport half_period_structure(double eta, int n, const IntegratorConfig& cfg) {
  circular::check_velocity(eta);
  if (n < 1) throw PreconditionViolated("half-period multiple must be >= 1");
  const HillSystem sys = odd_orbit_system(eta, cfg);
  const double h = circular::energy_for_velocity(eta);

  HalfPeriodReport rep;
  rep.n = n;
  rep.eta = eta;
  rep.T = sys.period;
  rep.Tprime = circular::period_derivative(h, cfg);
  rep.half = fundamental_solutions(sys, sys.period / 2.0, cfg);
  rep.multiple = n == 1 ? rep.half : fundamental_solutions(sys, n * sys.period / 2.0, cfg);
  rep.b_hat = rep.half.b();
  rep.b_hat_n = rep.multiple.b();

  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  rep.diagonal_residual = std::max(std::abs(rep.multiple.a() - sign), std::abs(rep.multiple.d() - sign));
  rep.lower_residual = std::abs(rep.multiple.c());

  const double power_pred = -sign * n * rep.b_hat;
  rep.power_rel_residual = std::abs(rep.b_hat_n - power_pred) / std::abs(power_pred);
  const double period_pred = -sign * n * (eta * eta / 2.0) * rep.Tprime;
  rep.period_rel_residual = std::abs(rep.b_hat_n - period_pred) / std::abs(period_pred);

  Eigen::Matrix2d power = Eigen::Matrix2d::Identity();
  for (int i = 0; i < n; ++i) power *= rep.half.matrix();
  rep.power_matrix_residual = (rep.multiple.matrix() - power).cwiseAbs().maxCoeff();
  return rep;
}

double period_derivative_from_monodromy(double h, const IntegratorConfig& cfg) {
  const double eta = circular::velocity_for_energy(h);
  const HillSystem sys = odd_orbit_system(eta, cfg);
  const auto half = fundamental_solutions(sys, sys.period / 2.0, cfg);
  // b_hat = h2 T'(h2) with the unshifted energy h2 = eta^2/2 = h + 2.
  return 2.0 * half.b() / (eta * eta);
}

}  // namespace sitnikov::hill
