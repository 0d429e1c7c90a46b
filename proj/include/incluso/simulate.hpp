/**
 * @file simulate.hpp
 * @brief Plain floating-point RK4 integration of single trajectories with a
 *        chosen perturbation y(t). Not rigorous; used to sample solutions.
 */
#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "incluso/interval.hpp"
#include "incluso/linalg.hpp"
#include "incluso/system.hpp"

namespace incluso {

/// y(t); only evaluated at the stages of the RK4 step.
using Selection = std::function<PVector(double t)>;

[[nodiscard]] inline PVector field_at(const PerturbedSystem& sys, const PVector& x, const PVector& y) {
  const auto v = sys.field_tape().evaluate<double>(x.span(), y.span(), [](const Interval& c) { return mid(c); });
  return PVector(v);
}

[[nodiscard]] inline PVector rk4_step(const PerturbedSystem& sys, const PVector& x, double t, double dt,
                                      const Selection& y) {
  const std::size_t n = x.size();
  auto axpy = [n](const PVector& a, double s, const PVector& b) {
    PVector r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const PVector k1 = field_at(sys, x, y(t));
  const PVector k2 = field_at(sys, axpy(x, dt / 2, k1), y(t + dt / 2));
  const PVector k3 = field_at(sys, axpy(x, dt / 2, k2), y(t + dt / 2));
  const PVector k4 = field_at(sys, axpy(x, dt, k3), y(t + dt));
  PVector r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = x[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return r;
}

[[nodiscard]] inline PVector simulate(const PerturbedSystem& sys, PVector x, double t0, double t1, std::size_t steps,
                                      const Selection& y) {
  const double dt = (t1 - t0) / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) x = rk4_step(sys, x, t0 + static_cast<double>(k) * dt, dt, y);
  return x;
}

/// Piecewise-constant selection with values drawn uniformly from `box`,
/// switching every `piece` time units on [0, horizon].
[[nodiscard]] inline Selection random_piecewise_selection(const IVector& box, double piece, double horizon,
                                                          std::mt19937_64& rng) {
  const auto pieces = static_cast<std::size_t>(horizon / piece) + 1;
  std::vector<PVector> values;
  values.reserve(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    PVector v(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
      v[i] = std::uniform_real_distribution<double>(box[i].lo(), box[i].hi())(rng);
    values.push_back(std::move(v));
  }
  return [values = std::move(values), piece](double t) {
    auto k = static_cast<std::size_t>(std::max(0.0, t) / piece);
    return values[std::min(k, values.size() - 1)];
  };
}

[[nodiscard]] inline PVector random_point(const IVector& box, std::mt19937_64& rng) {
  PVector p(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) p[i] = std::uniform_real_distribution<double>(box[i].lo(), box[i].hi())(rng);
  return p;
}

}  // namespace incluso
