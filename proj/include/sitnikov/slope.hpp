#pragma once

// Closed-form derivative of the monodromy trace with respect to the
// eccentricity at e = 0, for odd and even (m, p)-periodic orbits.
//
// Along the autonomous orbit phi of period 2m*pi/p,
//
//   tau'(0) = -p T'(h) int_0^{2m pi} F_te(phi, t) phi'(t) dt           (raw form)
//           =  p T'(h) / 4 * int_0^{2m pi} G(t) cos t dt                (cosine form)
//
// with F_te = d^2F/dt de at e = 0 and G = (phi^2 + r0^2)^(-3/2).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sitnikov/circular.hpp"
#include "sitnikov/hill.hpp"

namespace sitnikov::slope {

using circular::FrequencyPair;
using ode::IntegratorConfig;

enum class Parity { Odd, Even };

std::string_view to_string(Parity parity);
/// Accepts "odd" or "even"; throws PreconditionViolated otherwise.
Parity parse_parity(std::string_view text);

/// |tau'| below this is reported as undetermined rather than signed.
inline constexpr double kVerdictTolerance = 1e-6;
/// Floor for slopes that vanish identically.
inline constexpr double kVanishingTolerance = 1e-7;

struct SlopeReport {
  FrequencyPair mp;
  Parity parity = Parity::Odd;
  double h = 0.0;
  double eta = 0.0;
  double xi = 0.0;
  double Tprime = 0.0;
  double integral_Gcos = 0.0;       // int_0^{2m pi} G cos t dt
  double integral_Fte_phidot = 0.0; // int_0^{2m pi} F_te phi' dt
  double tau_prime = 0.0;           // cosine form
  double tau_prime_raw = 0.0;       // raw form
  std::optional<double> A_n;        // when m = 2pn: integral_Gcos / (4p)
  hill::StabilityClass verdict = hill::StabilityClass::ParabolicUndetermined;

  /// |raw - cosine| / max(|raw|, |cosine|), or 0 when both are exactly 0.
  double form_rel_residual() const;
};

/// Verdict for small e > 0 implied by the sign of tau'(0).
hill::StabilityClass verdict_for_slope(double tau_prime, double tol = kVerdictTolerance);

/// Starting point of the orbit: (0, eta) for odd, (xi, 0) for even.
Eigen::Vector2d initial_point(const circular::CircularOrbit& orbit, Parity parity);

/// G(t) = (phi^2(t) + r0^2)^(-3/2) along the (m, p) orbit of the given parity.
double G_along_orbit(Parity parity, FrequencyPair mp, double t, const IntegratorConfig& cfg = {});
std::vector<double> G_along_orbit(Parity parity, FrequencyPair mp, std::span<const double> times,
                                  const IntegratorConfig& cfg = {});

SlopeReport slope_odd(FrequencyPair mp, const IntegratorConfig& cfg = {});
SlopeReport slope_even(FrequencyPair mp, const IntegratorConfig& cfg = {});
SlopeReport slope(FrequencyPair mp, Parity parity, const IntegratorConfig& cfg = {});

struct AnReport {
  int n = 1;
  double h = 0.0;
  double eta = 0.0;
  double A_n = 0.0;        // int_0^{n pi} G_n cos t dt
  double half_full = 0.0;  // (1/2) int_0^{2n pi} G_n cos t dt
  double residual = 0.0;   // |A_n - half_full|
};

/// A_n along the odd (2n, 1) orbit, i.e. period 4n*pi.
AnReport compute_An(int n, const IntegratorConfig& cfg = {});
/// Same, on an already solved energy level h = h_{2n,1}.
AnReport compute_An_at(int n, double h, const IntegratorConfig& cfg = {});

struct VanishingReport {
  FrequencyPair mp;
  Parity parity = Parity::Odd;
  double tau_prime = 0.0;
  double residual = 0.0;  // |tau'|
  bool vanishes = false;  // residual <= kVanishingTolerance
  std::string explanation;
};

/// Slope for a non-resonant pair (m/(2p) not an integer), which must vanish.
/// Throws PreconditionViolated for resonant pairs.
VanishingReport vanishing_check(FrequencyPair mp, Parity parity, const IntegratorConfig& cfg = {});

struct ParityRelation {
  int n = 1;
  int p = 1;
  double odd_slope = 0.0;
  double even_slope = 0.0;
  double lhs = 0.0;  // even slope
  double rhs = 0.0;  // (-1)^n odd slope
  double rel_residual = 0.0;
};

/// Compares the even slope with (-1)^n times the odd slope at (2pn, p).
ParityRelation parity_relation_check(int n, int p, const IntegratorConfig& cfg = {});

struct ScanRow {
  int n = 1;
  double eta = 0.0;
  double h = 0.0;
  double A_n = 0.0;
  double A_n_loose = 0.0;    // same pipeline at 16x looser tolerances
  double certificate = 0.0;  // |A_n - A_n_loose|
  bool certified = false;    // certificate <= 1e-6
  bool positive = false;
};

/// Rows n = 1..n_max, computed on up to `threads` workers, in order of n.
std::vector<ScanRow> conjecture_scan(int n_max, const IntegratorConfig& cfg = {}, unsigned threads = 1);

}  // namespace sitnikov::slope
