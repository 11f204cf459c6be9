#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "sitnikov/circular.hpp"
#include "sitnikov/hill.hpp"

using namespace sitnikov;
using namespace sitnikov::hill;
using std::numbers::pi;

namespace {

constexpr double kEta1 = 1.7191723221619272;
constexpr double kTprime1 = 33.948036970294168;

Monodromy2x2 make(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return {m, 1.0};
}

}  // namespace

TEST_CASE("free particle and unit oscillator") {
  const auto free = HillSystem::from_potential([](double) { return 0.0; }, 3.0);
  const auto P = fundamental_solutions(free, 3.0);
  CHECK(P.a() == doctest::Approx(1.0));
  CHECK(P.b() == doctest::Approx(3.0));
  CHECK(std::abs(P.c()) < 1e-15);
  CHECK(P.d() == doctest::Approx(1.0));
  CHECK(P.length() == 3.0);
  for (const double s : {0.0, 1.2, 3.0}) CHECK(trace_frechet_kernel(free, s) == doctest::Approx(-3.0));

  const auto unit = HillSystem::from_potential([](double) { return 1.0; }, 2 * pi);
  const auto Q = fundamental_solutions(unit, 2 * pi);
  CHECK((Q.matrix() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(classify(Q) == StabilityClass::ParabolicStable);

  CHECK_THROWS_AS(fundamental_solutions(unit, 0.0), PreconditionViolated);
  CHECK_THROWS_AS(trace_frechet_kernel(unit, 7.0), PreconditionViolated);
  CHECK_THROWS_AS(trace(HillSystem{}), InvalidConfig);
}

TEST_CASE("Mathieu-type potential keeps unit determinant") {
  const auto sys = HillSystem::from_potential([](double t) { return 1.3 + 0.8 * std::cos(2 * t); }, pi);
  for (const double L : {pi, 2 * pi, 10 * pi}) CHECK(std::abs(fundamental_solutions(sys, L).det() - 1) < 1e-8);
}

TEST_CASE("classification") {
  CHECK(classify(make(0, 1, -1, 0)) == StabilityClass::Elliptic);
  CHECK(classify(make(1, 3, 0, 1)) == StabilityClass::ParabolicUnstable);
  CHECK(classify(make(-1, 0, 2, -1)) == StabilityClass::ParabolicUnstable);
  CHECK(classify(make(1, 0, 0, 1)) == StabilityClass::ParabolicStable);
  CHECK(classify(make(-1, 0, 0, -1)) == StabilityClass::ParabolicStable);
  const double a = (3 + std::sqrt(5.0)) / 2;
  CHECK(classify(make(a, 0, 0, 1 / a)) == StabilityClass::Hyperbolic);  // trace 3
  CHECK(classify(make(-a, 0, 0, -1 / a)) == StabilityClass::Hyperbolic);
  // trace 2 but not in Jordan form
  CHECK(classify(make(2, 1, -1, 0)) == StabilityClass::ParabolicUndetermined);
  // a = d = 1 with both off-diagonal entries set would not have unit determinant
  CHECK_THROWS_AS(classify(make(1, 1, 1, 1)), DeterminantViolation);
  CHECK_THROWS_AS(classify(make(2, 0, 0, 2)), DeterminantViolation);
  CHECK(classify(make(1, 0, 0, 1), 0.0) == StabilityClass::ParabolicStable);
  CHECK_THROWS_AS(classify(make(1, 0, 0, 1), -1.0), InvalidConfig);
  CHECK(to_string(StabilityClass::Hyperbolic) == "Hyperbolic");
}

TEST_CASE("half period of the n = 1 orbit") {
  const auto sys = odd_orbit_system(kEta1);
  CHECK(sys.period == doctest::Approx(4 * pi).epsilon(1e-12));
  const auto P = fundamental_solutions(sys, 2 * pi);
  CHECK(std::abs(P.a() + 1) < 1e-6);
  CHECK(std::abs(P.c()) < 1e-6);
  CHECK(std::abs(P.d() + 1) < 1e-6);
  CHECK(std::abs(P.det() - 1) < 1e-8);
}

TEST_CASE("psi identities along S") {
  const double T = 4 * pi;
  const std::vector<double> ts = {0.0, 0.3, 2.0, T / 4, T / 2, 9.0, T};
  const auto rep = verify_psi_identities(kEta1, ts);
  CHECK(rep.max_psi1 <= 1e-8);
  CHECK(rep.max_psi1dot <= 1e-8);
  CHECK(rep.max_psi2 <= 1e-5);

  const auto sys = odd_orbit_system(kEta1);
  const auto flows = propagate_at(sys, ts);
  CHECK(flows[0].psi(0, 0) == 1.0);
  CHECK(std::abs(flows[3].psi(0, 0)) < 1e-8);
  CHECK(std::abs(flows[4].psi(0, 0) + 1) < 1e-8);

  const std::vector<double> unsorted = {1.0, 0.5};
  CHECK_THROWS_AS(verify_psi_identities(kEta1, unsorted), PreconditionViolated);
  CHECK_THROWS_AS(verify_psi_identities(2.5, ts), VelocityOutOfRange);
}

TEST_CASE("half-period multiples") {
  for (int n = 1; n <= 4; ++n) {
    const auto rep = half_period_structure(kEta1, n);
    CHECK(rep.diagonal_residual <= 1e-6);
    CHECK(rep.lower_residual <= 1e-6);
    CHECK(rep.power_rel_residual <= 1e-5);
    CHECK(rep.period_rel_residual <= 1e-4);
    CHECK(rep.power_matrix_residual <= 1e-6);
    CHECK(std::abs(rep.multiple.det() - 1) <= 1e-8);
  }
  const auto one = half_period_structure(kEta1, 1);
  CHECK(one.b_hat == doctest::Approx(kEta1 * kEta1 / 2 * kTprime1).epsilon(1e-6));
  const auto two = half_period_structure(kEta1, 2);
  CHECK(two.b_hat_n == doctest::Approx(-2 * one.b_hat).epsilon(1e-6));
  CHECK(two.b_hat_n == doctest::Approx(-2 * kEta1 * kEta1 / 2 * kTprime1).epsilon(1e-6));
  CHECK_THROWS_AS(half_period_structure(kEta1, 0), PreconditionViolated);
}

TEST_CASE("T' from the monodromy") {
  CHECK(period_derivative_from_monodromy(-0.52222326335618347) == doctest::Approx(kTprime1).epsilon(1e-7));
  CHECK(period_derivative_from_monodromy(-1.0) == doctest::Approx(6.7695944434527355).epsilon(1e-7));
}

TEST_CASE("kernel along the n = 1 orbit is -b psi1^2") {
  const auto sys = odd_orbit_system(kEta1);
  const auto P = fundamental_solutions(sys, sys.period);
  for (const double s : {0.4, 2.5, 7.0, 11.0}) {
    const double psi1 = circular::odd_solution(kEta1, s).v / kEta1;
    CHECK(trace_frechet_kernel(sys, s) == doctest::Approx(-P.b() * psi1 * psi1).epsilon(1e-6));
  }
}

TEST_CASE("Frechet derivative converges at first order") {
  const auto sys = odd_orbit_system(kEta1);
  const double T = sys.period;
  const std::function<double(double)> shapes[] = {
      [](double) { return 1.0; },
      [T](double t) { return std::cos(2 * pi * t / T); },
      [T](double t) { return std::pow(std::sin(pi * t / T), 2); },
  };
  for (const auto& dq : shapes) {
    const auto chk = frechet_directional_check(sys, dq, 1e-5);
    CHECK(chk.first_order());
  }
  // Constant shift of the unit oscillator: tau = 2 cos(2 pi sqrt(1 + eps)), derivative 0 at eps = 0.
  const auto unit = HillSystem::from_potential([](double) { return 1.0; }, 2 * pi);
  CHECK(std::abs(trace_derivative(unit, [](double) { return 1.0; })) < 1e-9);
  CHECK_THROWS_AS(frechet_directional_check(sys, shapes[0], 0.0), PreconditionViolated);
}

TEST_CASE("perturbed adds to the potential") {
  const auto base = HillSystem::from_potential([](double t) { return t; }, 1.0);
  const auto p = base.perturbed([](double t) { return 2 * t; }, 0.5);
  CHECK(p.stiffness(3.0, 0.0) == 6.0);
  CHECK(base.stiffness(3.0, 0.0) == 3.0);
}
