#pragma once

// Adaptive Dormand-Prince 5(4) integration with dense output, event location
// and augmented-state quadrature.
//
// States are Eigen column vectors (fixed or dynamic size); a right-hand side is
// any callable `Vec rhs(Scalar t, const Vec& y)`.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "sitnikov/errors.hpp"

namespace sitnikov::ode {

struct IntegratorConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  std::int64_t max_steps = 5'000'000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw InvalidConfig("integrator tolerances must be positive");
    if (!(max_step > 0.0)) throw InvalidConfig("max_step must be positive");
    if (max_steps <= 0) throw InvalidConfig("max_steps must be positive");
  }

  /// Same settings with both tolerances multiplied by `factor`.
  [[nodiscard]] IntegratorConfig scaled(double factor) const {
    IntegratorConfig out = *this;
    out.abs_tol *= factor;
    out.rel_tol *= factor;
    return out;
  }
};

/// Point (t, x, xdot) on a trajectory of a scalar second-order equation.
template <typename Scalar>
struct PhaseState {
  Scalar t{};
  Scalar x{};
  Scalar v{};
};

template <typename Scalar, int N>
using Vector = Eigen::Matrix<Scalar, N, 1>;

enum class Direction : int { Falling = -1, Any = 0, Rising = 1 };

template <typename Vec>
struct EventSpec {
  using Scalar = typename Vec::Scalar;

  std::function<Scalar(Scalar, const Vec&)> fn;
  Direction direction = Direction::Any;
  int occurrence = 1;  // 1 = first crossing, k = k-th crossing

  static EventSpec first(std::function<Scalar(Scalar, const Vec&)> f, Direction d = Direction::Any) {
    return EventSpec{std::move(f), d, 1};
  }
  static EventSpec nth(std::function<Scalar(Scalar, const Vec&)> f, int k, Direction d = Direction::Any) {
    return EventSpec{std::move(f), d, k};
  }
};

template <typename Vec>
struct EventHit {
  typename Vec::Scalar t;
  Vec y;
  std::int64_t steps;
};

template <typename Vec, int K>
struct QuadratureResult {
  Vec y;
  Vector<typename Vec::Scalar, K> integrals;
};

namespace detail {

template <typename Vec>
bool all_finite(const Vec& y) {
  return y.array().isFinite().all();
}

// Dormand & Prince (1980) tableau, with Hairer's order-4 continuous extension.
template <typename Scalar>
struct DopriTableau {
  static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
  static constexpr Scalar a21 = Scalar(1) / 5;
  static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187,
                          a53 = Scalar(64448) / 6561, a54 = Scalar(-212) / 729;
  static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                          a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
  static constexpr Scalar a71 = Scalar(35) / 384, a73 = Scalar(500) / 1113, a74 = Scalar(125) / 192,
                          a75 = Scalar(-2187) / 6784, a76 = Scalar(11) / 84;
  static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                          e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
  static constexpr Scalar d1 = Scalar(-12715105075.0L / 11282082432.0L);
  static constexpr Scalar d3 = Scalar(87487479700.0L / 32700410799.0L);
  static constexpr Scalar d4 = Scalar(-10690763975.0L / 1880347072.0L);
  static constexpr Scalar d5 = Scalar(701980252875.0L / 199316789632.0L);
  static constexpr Scalar d6 = Scalar(-1453857185.0L / 822651844.0L);
  static constexpr Scalar d7 = Scalar(69997945.0L / 29380423.0L);
};

}  // namespace detail

/// Adaptive stepper with PI step-size control and FSAL reuse.
///
/// After every accepted step the interval [t_prev(), t()] carries a dense
/// interpolant and can be re-stepped exactly with `restep`.
template <typename Vec, typename Rhs>
class DormandPrince {
 public:
  using Scalar = typename Vec::Scalar;

  DormandPrince(Rhs rhs, Scalar t0, const Vec& y0, Scalar direction, const IntegratorConfig& cfg)
      : rhs_(std::move(rhs)), cfg_(cfg), dir_(direction >= 0 ? Scalar(1) : Scalar(-1)),
        t_(t0), t_prev_(t0), y_(y0), y_prev_(y0) {
    cfg_.validate();
    if (!detail::all_finite(y0) || !std::isfinite(static_cast<double>(t0)))
      throw NonFiniteState("initial state is not finite");
    k1_ = rhs_(t_, y_);
    ++evals_;
    if (!detail::all_finite(k1_)) throw NonFiniteState("right-hand side is not finite at the initial state");
    h_ = initial_step();
    rcont_[0] = y_;
    for (int i = 1; i < 5; ++i) rcont_[i] = Vec::Zero(y_.size());
  }

  Scalar t() const { return t_; }
  const Vec& y() const { return y_; }
  Scalar t_prev() const { return t_prev_; }
  const Vec& y_prev() const { return y_prev_; }
  std::int64_t steps() const { return steps_; }
  std::int64_t evaluations() const { return evals_; }

  /// Takes one accepted step without passing `t_limit`; lands on it exactly
  /// when the remaining distance is shorter than the proposed step.
  void step(Scalar t_limit) {
    using std::abs;
    using std::pow;
    const auto& tab = tableau_;
    int nonfinite_retries = 0;
    for (;;) {
      if (steps_ >= cfg_.max_steps)
        throw StepLimitExceeded("step budget of " + std::to_string(cfg_.max_steps) + " exhausted at t=" +
                                std::to_string(static_cast<double>(t_)));
      const Scalar remaining = (t_limit - t_) * dir_;
      if (remaining <= 0) return;
      Scalar h = std::min({abs(h_), Scalar(cfg_.max_step), remaining});
      bool lands = false;
      if (h >= remaining ||
          (std::isfinite(static_cast<double>(t_limit)) &&
           remaining - h <= Scalar(16) * std::numeric_limits<Scalar>::epsilon() * abs(t_limit))) {
        h = remaining;
        lands = true;
      }
      const Scalar hs = h * dir_;
      Vec y_new;
      Vec k7;
      const Scalar err = attempt(hs, y_new, k7);
      ++steps_;

      if (!std::isfinite(static_cast<double>(err)) || !detail::all_finite(y_new)) {
        if (++nonfinite_retries > 30) throw NonFiniteState("state became non-finite near t=" + std::to_string(static_cast<double>(t_)));
        h_ = h * Scalar(0.1) * dir_;
        continue;
      }

      const Scalar fac11 = pow(err, kExpo1);
      if (err <= 1) {
        Scalar fac = fac11 / pow(facold_, kBeta);
        fac = std::clamp(fac / kSafe, Scalar(1) / kFacMax, Scalar(1) / kFacMin);
        facold_ = std::max(err, Scalar(1e-4));

        const Scalar t_new = lands ? t_limit : t_ + hs;
        // Hairer's continuous extension on [t_, t_new].
        const Vec ydiff = y_new - y_;
        const Vec bspl = hs * k1_ - ydiff;
        rcont_[0] = y_;
        rcont_[1] = ydiff;
        rcont_[2] = bspl;
        rcont_[3] = ydiff - hs * k7 - bspl;
        rcont_[4] = hs * (tab.d1 * k1_ + tab.d3 * k3_ + tab.d4 * k4_ + tab.d5 * k5_ + tab.d6 * k6_ + tab.d7 * k7);

        t_prev_ = t_;
        y_prev_ = y_;
        k1_prev_ = k1_;
        t_ = t_new;
        y_ = y_new;
        k1_ = k7;
        h_ = (h / fac) * dir_;
        if (reject_streak_ > 0) h_ = dir_ * std::min(abs(h_), h);
        reject_streak_ = 0;
        return;
      }
      ++reject_streak_;
      h_ = dir_ * h / std::min(Scalar(1) / kFacMin, fac11 / kSafe);
    }
  }

  /// Dense interpolant of the last accepted step, valid on [t_prev(), t()].
  Vec dense(Scalar t) const {
    const Scalar span = t_ - t_prev_;
    if (span == 0) return y_;
    const Scalar theta = (t - t_prev_) / span;
    const Scalar theta1 = 1 - theta;
    return rcont_[0] + theta * (rcont_[1] + theta1 * (rcont_[2] + theta * (rcont_[3] + theta1 * rcont_[4])));
  }

  /// One uncontrolled step from (t_prev(), y_prev()) to `t`. For `t` inside the
  /// last accepted step the local error is within the accepted tolerance.
  Vec restep(Scalar t) const {
    const Scalar hs = t - t_prev_;
    if (hs == 0) return y_prev_;
    Vec y_new;
    Vec k7;
    Vec k[5];
    stages(t_prev_, y_prev_, k1_prev_, hs, y_new, k7, k);
    return y_new;
  }

 private:
  static constexpr Scalar kSafe = Scalar(0.9);
  static constexpr Scalar kBeta = Scalar(0.04);
  static constexpr Scalar kExpo1 = Scalar(0.2) - kBeta * Scalar(0.75);
  static constexpr Scalar kFacMin = Scalar(0.2);  // h_new / h bounds
  static constexpr Scalar kFacMax = Scalar(10);

  Scalar weighted_rms(const Vec& v, const Vec& a, const Vec& b) const {
    using std::abs;
    Scalar sum = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const Scalar sk = Scalar(cfg_.abs_tol) + Scalar(cfg_.rel_tol) * std::max(abs(a[i]), abs(b[i]));
      const Scalar r = v[i] / sk;
      sum += r * r;
    }
    using std::sqrt;
    return sqrt(sum / Scalar(v.size()));
  }

  Scalar initial_step() {
    using std::abs;
    using std::pow;
    using std::sqrt;
    const Vec zero = Vec::Zero(y_.size());
    const Scalar d0 = weighted_rms(y_, y_, zero);
    const Scalar d1 = weighted_rms(k1_, y_, zero);
    Scalar h0 = (d0 < Scalar(1e-10) || d1 < Scalar(1e-10)) ? Scalar(1e-6) : Scalar(0.01) * d0 / d1;
    h0 = std::min(h0, Scalar(cfg_.max_step));
    const Vec y1 = y_ + dir_ * h0 * k1_;
    const Vec f1 = rhs_(t_ + dir_ * h0, y1);
    ++evals_;
    const Scalar d2 = weighted_rms(Vec(f1 - k1_), y_, zero) / h0;
    const Scalar dm = std::max(d1, d2);
    const Scalar h1 = dm <= Scalar(1e-15) ? std::max(Scalar(1e-6), h0 * Scalar(1e-3)) : pow(Scalar(0.01) / dm, Scalar(0.2));
    return dir_ * std::min({Scalar(100) * h0, h1, Scalar(cfg_.max_step)});
  }

  void stages(Scalar t, const Vec& y, const Vec& k1, Scalar hs, Vec& y_new, Vec& k7, Vec (&k)[5]) const {
    const auto& c = tableau_;
    k[0] = rhs_(t + c.c2 * hs, Vec(y + hs * (c.a21 * k1)));
    k[1] = rhs_(t + c.c3 * hs, Vec(y + hs * (c.a31 * k1 + c.a32 * k[0])));
    k[2] = rhs_(t + c.c4 * hs, Vec(y + hs * (c.a41 * k1 + c.a42 * k[0] + c.a43 * k[1])));
    k[3] = rhs_(t + c.c5 * hs, Vec(y + hs * (c.a51 * k1 + c.a52 * k[0] + c.a53 * k[1] + c.a54 * k[2])));
    k[4] = rhs_(t + hs, Vec(y + hs * (c.a61 * k1 + c.a62 * k[0] + c.a63 * k[1] + c.a64 * k[2] + c.a65 * k[3])));
    y_new = y + hs * (c.a71 * k1 + c.a73 * k[1] + c.a74 * k[2] + c.a75 * k[3] + c.a76 * k[4]);
    k7 = rhs_(t + hs, y_new);
  }

  Scalar attempt(Scalar hs, Vec& y_new, Vec& k7) {
    const auto& c = tableau_;
    Vec k[5];
    stages(t_, y_, k1_, hs, y_new, k7, k);
    evals_ += 6;
    k3_ = k[1];
    k4_ = k[2];
    k5_ = k[3];
    k6_ = k[4];
    const Vec err = hs * (c.e1 * k1_ + c.e3 * k[1] + c.e4 * k[2] + c.e5 * k[3] + c.e6 * k[4] + c.e7 * k7);
    return weighted_rms(err, y_, y_new);
  }

  Rhs rhs_;
  IntegratorConfig cfg_;
  detail::DopriTableau<Scalar> tableau_{};
  Scalar dir_;
  Scalar t_;
  Scalar t_prev_;
  Scalar h_{};
  Vec y_;
  Vec y_prev_;
  Vec k1_, k1_prev_, k3_, k4_, k5_, k6_;
  Vec rcont_[5];
  Scalar facold_ = Scalar(1e-4);
  int reject_streak_ = 0;
  std::int64_t steps_ = 0;
  std::int64_t evals_ = 0;
};

template <typename Vec, typename Rhs>
DormandPrince<Vec, std::decay_t<Rhs>> make_stepper(Rhs&& rhs, typename Vec::Scalar t0, const Vec& y0,
                                                   typename Vec::Scalar t1, const IntegratorConfig& cfg) {
  return DormandPrince<Vec, std::decay_t<Rhs>>(std::forward<Rhs>(rhs), t0, y0, t1 >= t0 ? 1 : -1, cfg);
}

/// Terminal state at exactly t1. Works in either time direction.
template <typename Vec, typename Rhs>
Vec integrate(Rhs&& rhs, const Vec& y0, typename Vec::Scalar t0, typename Vec::Scalar t1,
              const IntegratorConfig& cfg = {}) {
  if (!std::isfinite(static_cast<double>(t0)) || !std::isfinite(static_cast<double>(t1)))
    throw InvalidConfig("integration interval must be finite");
  if (t0 == t1) return y0;
  auto stepper = make_stepper<Vec>(std::forward<Rhs>(rhs), t0, y0, t1, cfg);
  while (stepper.t() != t1) stepper.step(t1);
  return stepper.y();
}

/// States at each of `times` (monotone in the direction of integration).
/// Steps are clipped to land on every sample, so no interpolation error enters.
template <typename Vec, typename Rhs>
std::vector<Vec> integrate_at(Rhs&& rhs, const Vec& y0, typename Vec::Scalar t0,
                              std::span<const typename Vec::Scalar> times, const IntegratorConfig& cfg = {}) {
  std::vector<Vec> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  const auto t_last = times.back();
  auto stepper = make_stepper<Vec>(std::forward<Rhs>(rhs), t0, y0, t_last == t0 ? t0 + 1 : t_last, cfg);
  const bool forward = t_last >= t0;
  for (const auto ts : times) {
    if (forward ? ts < stepper.t() : ts > stepper.t())
      throw InvalidConfig("sample times must be monotone in the integration direction");
    while (stepper.t() != ts) stepper.step(ts);
    out.push_back(stepper.y());
  }
  return out;
}

/// States at arbitrary `times` on either side of t0, in the order given.
/// Samples after t0 are reached forward, samples before it backward.
template <typename Vec, typename Rhs>
std::vector<Vec> sample_trajectory(Rhs&& rhs, const Vec& y0, typename Vec::Scalar t0,
                                   std::span<const typename Vec::Scalar> times, const IntegratorConfig& cfg = {}) {
  using Scalar = typename Vec::Scalar;
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  const auto split = std::partition_point(order.begin(), order.end(), [&](std::size_t i) { return times[i] < t0; });

  std::vector<Scalar> fwd_t;
  std::vector<Scalar> bwd_t;
  for (auto it = split; it != order.end(); ++it) fwd_t.push_back(times[*it]);
  for (auto it = std::make_reverse_iterator(split); it != order.rend(); ++it) bwd_t.push_back(times[*it]);
  const auto fwd = integrate_at<Vec>(rhs, y0, t0, std::span<const Scalar>(fwd_t), cfg);
  const auto bwd = integrate_at<Vec>(rhs, y0, t0, std::span<const Scalar>(bwd_t), cfg);

  std::vector<Vec> out(times.size());
  std::size_t k = 0;
  for (auto it = split; it != order.end(); ++it) out[*it] = fwd[k++];
  k = 0;
  for (auto it = std::make_reverse_iterator(split); it != order.rend(); ++it) out[*it] = bwd[k++];
  return out;
}

/// Integrates until the `occurrence`-th crossing of `ev.fn` in the requested
/// direction. A zero exactly at t0 is not counted. The crossing is bracketed
/// on accepted steps, located on the dense interpolant, then polished with
/// exact re-steps from the start of the bracketing step.
template <typename Vec, typename Rhs>
EventHit<Vec> integrate_to_event(Rhs&& rhs, const Vec& y0, typename Vec::Scalar t0, const EventSpec<Vec>& ev,
                                 const IntegratorConfig& cfg = {},
                                 typename Vec::Scalar t_max = std::numeric_limits<typename Vec::Scalar>::infinity()) {
  using Scalar = typename Vec::Scalar;
  using std::abs;
  if (!ev.fn) throw InvalidConfig("event function is empty");
  if (ev.occurrence < 1) throw InvalidConfig("event occurrence must be >= 1");
  auto stepper = make_stepper<Vec>(std::forward<Rhs>(rhs), t0, y0, t_max, cfg);

  Scalar g_old = ev.fn(t0, y0);
  int count = 0;
  for (;;) {
    if (stepper.t() == t_max) throw EventNotFound("no event before t_max");
    try {
      stepper.step(t_max);
    } catch (const StepLimitExceeded& e) {
      throw EventNotFound(std::string("no event within step budget: ") + e.what());
    }
    const Scalar g_new = ev.fn(stepper.t(), stepper.y());
    const bool rising = g_old < 0 && g_new >= 0;
    const bool falling = g_old > 0 && g_new <= 0;
    const bool hit = (ev.direction == Direction::Rising && rising) || (ev.direction == Direction::Falling && falling) ||
                     (ev.direction == Direction::Any && (rising || falling));
    if (hit && ++count == ev.occurrence) {
      const Scalar ta = stepper.t_prev();
      const Scalar tb = stepper.t();
      if (g_new == 0) return {tb, stepper.y(), stepper.steps()};

      const auto tol = [](Scalar a, Scalar b) {
        return abs(b - a) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * std::max(abs(a), abs(b));
      };
      std::uintmax_t iters = 200;
      const auto on_dense = [&](Scalar s) { return ev.fn(s, stepper.dense(s)); };
      const auto [da, db] = boost::math::tools::toms748_solve(on_dense, ta, tb, g_old, g_new, tol, iters);
      const Scalar guess = (da + db) / 2;

      // Exact re-steps from the bracketing step's origin.
      const auto on_steps = [&](Scalar s) { return ev.fn(s, stepper.restep(s)); };
      Scalar lo = ta, hi = tb, g_lo = g_old, g_hi = g_new;
      const Scalar g_guess = on_steps(guess);
      if (g_guess == 0) return {guess, stepper.restep(guess), stepper.steps()};
      if ((g_guess < 0) == (g_lo < 0)) {
        lo = guess;
        g_lo = g_guess;
      } else {
        hi = guess;
        g_hi = g_guess;
      }
      iters = 200;
      const auto [pa, pb] = boost::math::tools::toms748_solve(on_steps, lo, hi, g_lo, g_hi, tol, iters);
      const Vec ya = stepper.restep(pa);
      const Vec yb = stepper.restep(pb);
      if (abs(ev.fn(pa, ya)) <= abs(ev.fn(pb, yb))) return {pa, ya, stepper.steps()};
      return {pb, yb, stepper.steps()};
    }
    g_old = g_new;
  }
}

/// Integrates y' = rhs and, alongside it, Q' = integrand(t, y) with Q(t0) = 0.
/// The accumulators are part of the state and share its error control.
template <int K, typename Vec, typename Rhs, typename Integrand>
QuadratureResult<Vec, K> integrate_with_quadratures(Rhs&& rhs, const Vec& y0, Integrand&& integrand,
                                                    typename Vec::Scalar t0, typename Vec::Scalar t1,
                                                    const IntegratorConfig& cfg = {}) {
  using Scalar = typename Vec::Scalar;
  constexpr int N = Vec::RowsAtCompileTime;
  static_assert(N != Eigen::Dynamic, "augmented quadrature needs a fixed-size state");
  using Aug = Vector<Scalar, N + K>;
  const auto aug_rhs = [&](Scalar t, const Aug& z) -> Aug {
    const Vec y = z.template head<N>();
    Aug dz;
    dz.template head<N>() = rhs(t, y);
    dz.template tail<K>() = integrand(t, y);
    return dz;
  };
  Aug z0;
  z0.template head<N>() = y0;
  z0.template tail<K>().setZero();
  const Aug z1 = integrate<Aug>(aug_rhs, z0, t0, t1, cfg);
  return {z1.template head<N>(), z1.template tail<K>()};
}

template <typename Vec>
struct ScalarQuadrature {
  Vec y;
  typename Vec::Scalar integral;
};

/// Single-integrand form of integrate_with_quadratures.
template <typename Vec, typename Rhs, typename Integrand>
ScalarQuadrature<Vec> integrate_with_quadrature(Rhs&& rhs, const Vec& y0, Integrand&& integrand,
                                                typename Vec::Scalar t0, typename Vec::Scalar t1,
                                                const IntegratorConfig& cfg = {}) {
  using Scalar = typename Vec::Scalar;
  auto wrapped = [&](Scalar t, const Vec& y) { return Vector<Scalar, 1>(integrand(t, y)); };
  auto r = integrate_with_quadratures<1>(std::forward<Rhs>(rhs), y0, wrapped, t0, t1, cfg);
  return {r.y, r.integrals[0]};
}

}  // namespace sitnikov::ode
