#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sitnikov/errors.hpp"

namespace sitnikov {

/// Half the separation of the primaries on the circular orbit.
inline constexpr double kPrimaryRadius = 0.5;

namespace kepler {

template <typename Scalar>
struct KeplerSolution {
  Scalar u;  // eccentric anomaly
  Scalar e;
  Scalar t;  // mean anomaly
  Scalar residual() const {
    using std::sin;
    return u - e * sin(u) - t;
  }
};

template <typename Scalar>
void check_eccentricity(Scalar e) {
  if (!(e >= 0 && e < 1))
    throw EccentricityOutOfRange("eccentricity must lie in [0, 1), got " + std::to_string(static_cast<double>(e)));
}

namespace detail {

// Root of u - e sin u = t for t in [0, 2pi). The root lies in [t - e, t + e].
template <typename Scalar>
Scalar solve_reduced(Scalar t, Scalar e) {
  using std::abs;
  using std::cos;
  using std::sin;
  if (e == 0) return t;
  const Scalar lo = t - e;
  const Scalar hi = t + e;
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar u = t + e * sin(t);
  for (int it = 0; it < 50; ++it) {
    const Scalar step = (u - e * sin(u) - t) / (1 - e * cos(u));
    u -= step;
    if (!(u >= lo && u <= hi)) break;
    if (abs(step) <= 4 * eps * (1 + abs(u))) return u;
  }
  if (u >= lo && u <= hi && abs(u - e * sin(u) - t) <= 16 * eps * (1 + abs(t))) return u;
  // Newton failed; bisect the monotone map.
  Scalar a = lo;
  Scalar b = hi;
  for (int it = 0; it < 200 && b - a > 2 * eps * (1 + abs(a)); ++it) {
    const Scalar mid = (a + b) / 2;
    if (mid - e * sin(mid) - t < 0)
      a = mid;
    else
      b = mid;
  }
  return (a + b) / 2;
}

}  // namespace detail

/// Eccentric anomaly u with u - e sin u = t.
template <typename Scalar>
Scalar solve_kepler(Scalar t, Scalar e) {
  using std::floor;
  check_eccentricity(e);
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  const Scalar turns = floor(t / two_pi);
  Scalar reduced = t - turns * two_pi;
  if (reduced >= two_pi) reduced -= two_pi;
  if (reduced < 0) reduced = 0;
  return detail::solve_reduced(reduced, e) + turns * two_pi;
}

template <typename Scalar>
KeplerSolution<Scalar> solve(Scalar t, Scalar e) {
  return {solve_kepler(t, e), e, t};
}

/// Separation r(t, e) = r0 (1 - e cos u(t, e)).
template <typename Scalar>
Scalar radius(Scalar t, Scalar e) {
  using std::cos;
  if (e == 0) {
    check_eccentricity(e);
    return Scalar(kPrimaryRadius);
  }
  return Scalar(kPrimaryRadius) * (1 - e * cos(solve_kepler(t, e)));
}

/// dr/de at e = 0.
template <typename Scalar>
Scalar radius_de(Scalar t) {
  using std::cos;
  return -Scalar(kPrimaryRadius) * cos(t);
}

}  // namespace kepler
}  // namespace sitnikov
