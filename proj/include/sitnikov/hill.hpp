#pragma once

// Hill's equation  y'' + q(t) y = 0: fundamental solutions, Poincare matrices,
// traces and their Frechet derivative.

#include <Eigen/Core>

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "sitnikov/ode.hpp"

namespace sitnikov::hill {

using ode::IntegratorConfig;

/// Poincare matrix [[psi1, psi2], [psi1', psi2']] over an interval of length `length`.
class Monodromy2x2 {
 public:
  Monodromy2x2() = default;
  Monodromy2x2(const Eigen::Matrix2d& m, double length) : m_(m), length_(length) {}

  double a() const { return m_(0, 0); }
  double b() const { return m_(0, 1); }
  double c() const { return m_(1, 0); }
  double d() const { return m_(1, 1); }
  double trace() const { return m_.trace(); }
  double det() const { return m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0); }
  double length() const { return length_; }
  const Eigen::Matrix2d& matrix() const { return m_; }

 private:
  Eigen::Matrix2d m_ = Eigen::Matrix2d::Identity();
  double length_ = 0.0;
};

enum class StabilityClass { Elliptic, Hyperbolic, ParabolicStable, ParabolicUnstable, ParabolicUndetermined };

std::string_view to_string(StabilityClass cls);

inline constexpr double kClassifyTolerance = 1e-6;

/// Elliptic for |tr| < 2 - tol, hyperbolic for |tr| > 2 + tol. In the band
/// between, +-I is ParabolicStable, a Jordan block with a = d = +-1 and exactly
/// one nonzero off-diagonal entry is ParabolicUnstable, anything else is
/// ParabolicUndetermined. Throws DeterminantViolation if |det - 1| > 1e-6.
StabilityClass classify(const Monodromy2x2& mono, double tol = kClassifyTolerance);

/// A Hill equation whose potential may be driven by a scalar orbit:
///   x'' = -force(t, x),  q(t) = stiffness(t, x(t)).
/// Without a driver, x stays at x0 and q depends on t alone.
struct HillSystem {
  using Coefficient = std::function<double(double t, double x)>;

  double period = 0.0;
  Coefficient stiffness;
  Coefficient force;
  double x0 = 0.0;
  double v0 = 0.0;

  static HillSystem from_potential(std::function<double(double)> q, double period);
  static HillSystem along_orbit(Coefficient force, Coefficient stiffness, double x0, double v0, double period);

  /// Same system with q replaced by q + scale * dq.
  HillSystem perturbed(std::function<double(double)> dq, double scale) const;
};

/// Driver state and fundamental matrix at time t.
struct Flow {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  Eigen::Matrix2d psi = Eigen::Matrix2d::Identity();  // columns (psi_i, psi_i')
};

Flow propagate(const HillSystem& sys, double t_end, const IntegratorConfig& cfg = {});
std::vector<Flow> propagate_at(const HillSystem& sys, std::span<const double> times, const IntegratorConfig& cfg = {});

/// Poincare matrix over [0, t_end].
Monodromy2x2 fundamental_solutions(const HillSystem& sys, double t_end, const IntegratorConfig& cfg = {});

/// Trace of the Poincare matrix over one period.
double trace(const HillSystem& sys, const IntegratorConfig& cfg = {});

/// K(s) with d(trace)/dq [dq] = int_0^T K(s) dq(s) ds.
double trace_frechet_kernel(const HillSystem& sys, double s, const IntegratorConfig& cfg = {});

/// int_0^T K(s) dq(s) ds, accumulated along the fundamental solutions.
double trace_derivative(const HillSystem& sys, const std::function<double(double)>& dq,
                        const IntegratorConfig& cfg = {});

struct FrechetCheck {
  double eps = 0.0;
  double kernel_integral = 0.0;  // int_0^T K dq
  double quotient = 0.0;         // (tau(q + eps dq) - tau(q)) / eps
  double quotient_half = 0.0;    // same at eps / 2
  double error = 0.0;            // |quotient - kernel_integral|
  double error_half = 0.0;
  double extrapolated_error = 0.0;  // |2 quotient_half - quotient - kernel_integral|

  double ratio() const { return error / error_half; }
  /// First order: the error halves with eps and Richardson removes it.
  bool first_order() const {
    return ratio() > 1.8 && ratio() < 2.2 && extrapolated_error <= 0.05 * error;
  }
};

/// One-sided difference quotients of the trace against the kernel integral.
FrechetCheck frechet_directional_check(const HillSystem& sys, const std::function<double(double)>& dq, double eps,
                                       const IntegratorConfig& cfg = {});

// --- Linearization along odd solutions S(t, eta) of the circular problem ---

/// q(t) = f'(S(t, eta)) with the minimal period T(h) of S as the period.
HillSystem odd_orbit_system(double eta, const IntegratorConfig& cfg = {});

struct PsiIdentityReport {
  double eta = 0.0;
  std::vector<double> times;
  std::vector<double> psi1_residual;     // |psi1 - S'/eta|
  std::vector<double> psi1dot_residual;  // |psi1' + f(S)/eta|
  std::vector<double> psi2_residual;     // |psi2 - dS/deta (finite difference)|
  double max_psi1 = 0.0;
  double max_psi1dot = 0.0;
  double max_psi2 = 0.0;
};

/// Compares the fundamental solutions along S(., eta) with S itself.
PsiIdentityReport verify_psi_identities(double eta, std::span<const double> times, const IntegratorConfig& cfg = {});

struct HalfPeriodReport {
  int n = 1;
  double eta = 0.0;
  double T = 0.0;
  double Tprime = 0.0;
  Monodromy2x2 half;      // P_{T/2}
  Monodromy2x2 multiple;  // P_{nT/2}
  double b_hat = 0.0;     // psi2(T/2)
  double b_hat_n = 0.0;   // psi2(nT/2)
  double diagonal_residual = 0.0;   // max |a - (-1)^n|, |d - (-1)^n|
  double lower_residual = 0.0;      // |c|
  double power_rel_residual = 0.0;  // b_hat_n vs (-1)^{n+1} n b_hat
  double period_rel_residual = 0.0; // b_hat_n vs (-1)^{n+1} n (eta^2/2) T'
  double power_matrix_residual = 0.0;  // max entry of P_{nT/2} - P_{T/2}^n
};

HalfPeriodReport half_period_structure(double eta, int n, const IntegratorConfig& cfg = {});

/// T'(h) = 2 psi2(T/2) / eta^2, the monodromy route to the period derivative.
double period_derivative_from_monodromy(double h, const IntegratorConfig& cfg = {});

}  // namespace sitnikov::hill
