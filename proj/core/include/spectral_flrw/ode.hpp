#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Core>

namespace sflrw::ode {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

/// One classical Runge-Kutta step of y' = f(t, y).
template <int N, class F>
[[nodiscard]] Vec<N> rk4_step(const F& f, double t, const Vec<N>& y, double h) {
  const Vec<N> k1 = f(t, y);
  const Vec<N> k2 = f(t + 0.5 * h, Vec<N>(y + 0.5 * h * k1));
  const Vec<N> k3 = f(t + 0.5 * h, Vec<N>(y + 0.5 * h * k2));
  const Vec<N> k4 = f(t + h, Vec<N>(y + h * k3));
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <int N>
struct EmbeddedStep {
  Vec<N> y;    ///< fifth-order solution
  Vec<N> err;  ///< difference to the embedded fourth-order solution
};

/// Dormand-Prince 5(4) step (no FSAL reuse, so every call is self-contained).
template <int N, class F>
[[nodiscard]] EmbeddedStep<N> dopri5_step(const F& f, double t, const Vec<N>& y, double h) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Vec<N> k1 = f(t, y);
  const Vec<N> k2 = f(t + c2 * h, Vec<N>(y + h * a21 * k1));
  const Vec<N> k3 = f(t + c3 * h, Vec<N>(y + h * (a31 * k1 + a32 * k2)));
  const Vec<N> k4 = f(t + c4 * h, Vec<N>(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  const Vec<N> k5 =
      f(t + c5 * h, Vec<N>(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  const Vec<N> k6 =
      f(t + h, Vec<N>(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
  const Vec<N> y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Vec<N> k7 = f(t + h, y5);
  return {y5, h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)};
}

/// Max norm of the tolerance-scaled error.
template <int N>
[[nodiscard]] double error_norm(const Vec<N>& err, const Vec<N>& y0, const Vec<N>& y1,
                                double rel_tol, double abs_tol) {
  double worst = 0.0;
  for (int i = 0; i < y0.size(); ++i) {
    const double scale = abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

}  // namespace sflrw::ode
