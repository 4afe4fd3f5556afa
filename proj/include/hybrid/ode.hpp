#ifndef HYBRID_ODE_HPP
#define HYBRID_ODE_HPP

#include <algorithm>
#include <cmath>
#include <utility>

#include "hybrid/errors.hpp"

namespace hybrid::ode {

struct Options {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 -> heuristic
  long max_steps = 200000000L;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
inline constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
inline constexpr double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
inline constexpr double e4 = 125.0 / 192.0 - 393.0 / 640.0;
inline constexpr double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
inline constexpr double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
inline constexpr double e7 = -1.0 / 40.0;

template <typename State>
double error_norm(const State& err, const State& y0, const State& y1, const Options& opt) {
  auto scale = (opt.atol + opt.rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  return (err.cwiseAbs().array() / scale).maxCoeff();
}

}  // namespace detail

// Integrates y' = f(t, y) in place from t0 to t_end (t_end > t0).
// after_step(t, y) runs on each accepted step and may mutate y (e.g.
// re-symmetrize a density matrix); returning false rejects the step and
// retries with half the size.
template <typename State, typename Rhs, typename AfterStep>
Stats integrate(Rhs&& f, State& y, double t0, double t_end, const Options& opt,
                AfterStep&& after_step) {
  Stats stats;
  if (t_end <= t0) return stats;

  double t = t0;
  State k1 = f(t, y);
  double h = opt.initial_step;
  if (h <= 0.0) {
    double ynorm = y.cwiseAbs().maxCoeff();
    double fnorm = k1.cwiseAbs().maxCoeff();
    h = (fnorm > 0.0) ? 0.01 * (ynorm + opt.atol) / fnorm : (t_end - t0) * 1e-3;
    h = std::min(h, (t_end - t0) * 0.1);
    if (h <= 0.0) h = (t_end - t0) * 1e-6;
  }
  const double h_floor = (t_end - t0) * 1e-15;

  State k2, k3, k4, k5, k6, k7, y_new, err;
  bool k1_fresh = true;
  while (t < t_end) {
    if (stats.accepted + stats.rejected > opt.max_steps)
      throw integration_error("integrate: step budget exhausted");
    h = std::min(h, t_end - t);
    if (!k1_fresh) {
      k1 = f(t, y);
      k1_fresh = true;
    }

    using namespace detail;
    k2 = f(t + h * a21, (y + h * a21 * k1).eval());
    k3 = f(t + h * (a31 + a32), (y + h * (a31 * k1 + a32 * k2)).eval());
    k4 = f(t + h * 0.8, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    k5 = f(t + h * (8.0 / 9.0), (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    k6 = f(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = f(t + h, y_new);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = error_norm(err, y, y_new, opt);
    if (en <= 1.0) {
      double t_new = t + h;
      if (after_step(t_new, y_new)) {
        t = t_new;
        y.swap(y_new);
        // FSAL would reuse k7; keep it simple and robust against
        // after_step mutating y
        k1_fresh = false;
        ++stats.accepted;
        double factor = (en > 0.0) ? 0.9 * std::pow(en, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        continue;
      }
      // vetoed by the step guard
      ++stats.rejected;
      h *= 0.5;
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
    }
    if (h < h_floor) throw integration_error("integrate: step size underflow (stiff problem?)");
  }
  return stats;
}

template <typename State, typename Rhs>
Stats integrate(Rhs&& f, State& y, double t0, double t_end, const Options& opt) {
  return integrate(std::forward<Rhs>(f), y, t0, t_end, opt,
                   [](double, State&) { return true; });
}

}  // namespace hybrid::ode

#endif
