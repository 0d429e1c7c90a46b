// Independent reference computations for the test suites. Nothing here goes
// through the library's expression tapes or interval code.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using LVec = std::vector<long double>;
using Field = std::function<LVec(long double t, const LVec& x)>;

inline LVec rk4_step(const Field& f, long double t, const LVec& x, long double dt) {
  const std::size_t n = x.size();
  auto shift = [&](const LVec& k, long double s) {
    LVec r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = x[i] + s * k[i];
    return r;
  };
  const LVec k1 = f(t, x);
  const LVec k2 = f(t + dt / 2, shift(k1, dt / 2));
  const LVec k3 = f(t + dt / 2, shift(k2, dt / 2));
  const LVec k4 = f(t + dt, shift(k3, dt));
  LVec r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = x[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return r;
}

inline LVec rk4(const Field& f, LVec x, long double t0, long double t1, std::size_t steps) {
  const long double dt = (t1 - t0) / static_cast<long double>(steps);
  for (std::size_t k = 0; k < steps; ++k) x = rk4_step(f, t0 + dt * static_cast<long double>(k), x, dt);
  return x;
}

/// RK4 with Richardson extrapolation from `steps` and 2·`steps` (error O(dt⁶) for smooth fields).
inline LVec rk4_richardson(const Field& f, const LVec& x0, long double t0, long double t1, std::size_t steps) {
  const LVec a = rk4(f, x0, t0, t1, steps);
  const LVec b = rk4(f, x0, t0, t1, 2 * steps);
  LVec r(x0.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] + (b[i] - a[i]) / 15;
  return r;
}

/// ∫₀ʰ e^{J(h-s)} C ds as the solution at time h of y' = J y + C, y(0) = 0.
inline LVec exp_integral(const std::vector<std::vector<long double>>& J, const LVec& C, long double h) {
  const std::size_t n = C.size();
  const Field f = [&](long double, const LVec& y) {
    LVec r(n);
    for (std::size_t i = 0; i < n; ++i) {
      long double s = C[i];
      for (std::size_t j = 0; j < n; ++j) s += J[i][j] * y[j];
      r[i] = s;
    }
    return r;
  };
  return rk4_richardson(f, LVec(n, 0.0L), 0.0L, h, 2000);
}

// ---- harmonic oscillator x1' = x2 + y1, x2' = -x1 + y2 --------------------------------

inline Field oscillator(std::function<std::array<long double, 2>(long double)> y) {
  return [y = std::move(y)](long double t, const LVec& x) {
    const auto e = y(t);
    return LVec{x[1] + e[0], -x[0] + e[1]};
  };
}

/// Closed form of the resonantly forced oscillator x1' = x2, x2' = -x1 + eps sin t from (1, 0).
inline std::array<long double, 2> resonant_solution(long double eps, long double t) {
  return {std::cos(t) + eps / 2 * std::sin(t) - eps / 2 * t * std::cos(t), -std::sin(t) + eps / 2 * t * std::sin(t)};
}

// ---- Rössler x' = -(y+z) + e1, y' = x + 0.2y + e2, z' = 0.2 + z(x - 5.7) + e3 -----------

/// Piecewise-constant perturbation switching every `piece` time units.
struct PiecewiseConstant {
  long double piece = 0.1L;
  std::vector<std::array<long double, 3>> values;

  std::array<long double, 3> operator()(long double t) const {
    auto k = static_cast<std::size_t>(std::max(0.0L, t) / piece);
    return values[std::min(k, values.size() - 1)];
  }

  static PiecewiseConstant random(long double eps, long double piece, long double horizon, std::mt19937_64& rng) {
    PiecewiseConstant p;
    p.piece = piece;
    std::uniform_real_distribution<double> u(-static_cast<double>(eps), static_cast<double>(eps));
    const auto count = static_cast<std::size_t>(horizon / piece) + 1;
    for (std::size_t k = 0; k < count; ++k) p.values.push_back({u(rng), u(rng), u(rng)});
    return p;
  }
};

inline LVec rossler_field(const LVec& x, const std::array<long double, 3>& e) {
  return {-(x[1] + x[2]) + e[0], x[0] + 0.2L * x[1] + e[1], 0.2L + x[2] * (x[0] - 5.7L) + e[2]};
}

struct Crossing {
  long double time;
  LVec point;
};

/// First upward crossing of x = 0 after the trajectory has been at x < 0.
/// Steps of size dt never straddle a switch of the perturbation (piece must be
/// a multiple of dt); the crossing step is refined by bisection.
inline std::optional<Crossing> rossler_crossing(const LVec& x0, const PiecewiseConstant& e, long double dt,
                                                long double horizon) {
  auto step = [&](long double t, const LVec& x, long double h) {
    const auto ev = e(t + h / 2);
    return rk4_step([&](long double, const LVec& v) { return rossler_field(v, ev); }, t, x, h);
  };
  LVec x = x0;
  bool left = false;
  const auto n = static_cast<std::size_t>(horizon / dt);
  for (std::size_t k = 0; k < n; ++k) {
    const long double t = dt * static_cast<long double>(k);
    const LVec next = step(t, x, dt);
    if (x[0] < 0) left = true;
    if (left && x[0] < 0 && next[0] >= 0) {
      long double lo = 0;
      long double hi = dt;
      for (int it = 0; it < 80; ++it) {
        const long double m = (lo + hi) / 2;
        if (step(t, x, m)[0] < 0) lo = m;
        else hi = m;
      }
      LVec p = step(t, x, hi);
      return Crossing{t + hi, p};
    }
    x = next;
  }
  return std::nullopt;
}

}  // namespace oracle
