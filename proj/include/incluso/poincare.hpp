/**
 * @file poincare.hpp
 * @brief Rigorous Poincaré maps of perturbed systems on affine sections.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "incluso/errors.hpp"
#include "incluso/inclusion.hpp"
#include "incluso/interval.hpp"
#include "incluso/linalg.hpp"
#include "incluso/lohner.hpp"
#include "incluso/system.hpp"

namespace incluso {

enum class Direction { positive, negative };

/// Hyperplane α(x) = ⟨normal, x⟩ - offset = 0, crossed with dα/dt of the given sign.
struct Section {
  PVector normal;
  double offset = 0.0;
  Direction direction = Direction::positive;

  void validate(std::size_t n) const {
    detail::require_same(normal.size(), n, "section normal dimension");
    bool nonzero = false;
    for (double v : normal) {
      if (!std::isfinite(v)) throw DomainError("section normal must be finite");
      nonzero = nonzero || v != 0.0;
    }
    if (!nonzero) throw DomainError("section normal must be nonzero");
  }

  [[nodiscard]] Interval alpha(const IVector& x) const {
    Interval s(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s += Interval(normal[i]) * x[i];
    return s - Interval(offset);
  }

  /// Index of the only nonzero normal component, if the section is a coordinate plane.
  [[nodiscard]] std::optional<std::size_t> coordinate() const {
    std::optional<std::size_t> k;
    for (std::size_t i = 0; i < normal.size(); ++i) {
      if (normal[i] == 0.0) continue;
      if (k) return std::nullopt;
      k = i;
    }
    return k;
  }
};

struct PoincareOptions {
  std::size_t max_steps = 100000;
  double time_tolerance = 1e-10;  // relative to the step size
};

struct PoincareResult {
  IVector image;
  Interval crossing_time;
  std::size_t steps = 0;
};

namespace detail {

// Sign-adjusted α: negative before the crossing, positive after it.
inline Interval oriented_alpha(const Section& sec, const IVector& x) {
  const Interval a = sec.alpha(x);
  return sec.direction == Direction::positive ? a : -a;
}

inline bool strictly_before(const Section& sec, const IVector& x) { return oriented_alpha(sec, x).hi() < 0.0; }
inline bool strictly_after(const Section& sec, const IVector& x) { return oriented_alpha(sec, x).lo() > 0.0; }

}  // namespace detail

/// Image of `set0` under the first-return map to `sec`, together with an
/// enclosure of the crossing time, for a set given at time t0.
///
/// The set is advanced with full steps while it stays strictly before the
/// section, then with halved steps down to the time tolerance. From there,
/// steps are taken until the set is strictly past the section; the union E of
/// the between-step enclosures brackets every crossing and the crossing itself
/// is located by the mean-value bound α(x(t_lo + τ)) ∈ α(x_lo) + τ·⟨n, f(E, Wy)⟩.
[[nodiscard]] inline PoincareResult poincare_map(const PerturbedSystem& sys, const EnclosureSet& set0,
                                                 const Section& sec, const SolverConfig& cfg,
                                                 const PoincareOptions& opt = {}, double t0 = 0.0) {
  cfg.validate();
  sec.validate(sys.dimension());
  detail::require_same(dimension(set0), sys.dimension(), "set dimension");

  const double h = cfg.step;
  EnclosureSet set = set0;
  Interval t(t0);
  std::size_t steps = 0;

  auto advance = [&](const EnclosureSet& s, double g, std::size_t at) -> StepBundle {
    if (steps >= opt.max_steps) throw NoCrossing("no section crossing within " + std::to_string(opt.max_steps) + " steps");
    ++steps;
    SolverConfig c = cfg;
    c.step = g;
    try {
      return inclusion_step(sys, s, 0.0, c);
    } catch (IntegrationError& e) {
      e.set_step_index(at);
      throw;
    }
  };

  // Reach the side before the section.
  while (!detail::strictly_before(sec, hull_of(set))) {
    StepBundle b = advance(set, h, steps);
    set = std::move(b.set_next);
    t += Interval(h);
  }

  // Full steps, then halved steps, while the next set stays strictly before.
  const double tol = opt.time_tolerance * h;
  double g = h;
  while (g >= tol) {
    StepBundle b = advance(set, g, steps);
    if (detail::strictly_before(sec, hull_of(b.set_next))) {
      set = std::move(b.set_next);
      t += Interval(g);
    } else {
      g *= 0.5;
    }
  }

  // Sweep across the section.
  const Interval t_lo = t;
  const IVector x_lo = hull_of(set);
  std::optional<IVector> E;
  Interval elapsed(0.0);
  g = std::max(g, tol);
  for (;;) {
    StepBundle b = advance(set, g, steps);
    E = E ? hull(*E, b.Ek) : b.Ek;
    elapsed += Interval(g);
    set = std::move(b.set_next);
    if (detail::strictly_after(sec, hull_of(set))) break;
    g = std::min(2.0 * g, h);
  }

  const IVector F = eval_field(sys, *E, sys.perturbation());
  Interval rate(0.0);
  for (std::size_t i = 0; i < F.size(); ++i) rate += Interval(sec.normal[i]) * F[i];
  if (sec.direction == Direction::negative) rate = -rate;
  if (!(rate.lo() > 0.0)) throw NonTransversal("flow is not transversal to the section on the crossing enclosure");

  const Interval a_lo = detail::oriented_alpha(sec, x_lo);
  Interval tau = -a_lo / rate;
  tau = intersect(tau, Interval(0.0, elapsed.hi())).value_or(Interval(0.0, elapsed.hi()));

  IVector image = x_lo + tau * F;
  if (auto v = intersect(image, *E)) image = *v;
  if (auto k = sec.coordinate()) image[*k] = Interval(sec.offset) / Interval(sec.normal[*k]);

  return PoincareResult{std::move(image), t_lo + tau, steps};
}

}  // namespace incluso
