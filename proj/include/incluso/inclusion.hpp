/**
 * @file inclusion.hpp
 * @brief Perturbation bounds [Δ] (log-norm and component-wise methods), the
 *        rigorous exp-integral series and the one-step algorithm for
 *        differential inclusions.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "incluso/errors.hpp"
#include "incluso/interval.hpp"
#include "incluso/linalg.hpp"
#include "incluso/lohner.hpp"
#include "incluso/system.hpp"

namespace incluso {

enum class Method { ln, cw };

/// Which box the component-wise method evaluates [δ] on.
enum class CwVariant {
  delta_on_w1,  // δ on [W1], J on [W2]×[Wy]
  delta_on_w2,  // δ on [W2]×[Wy], J on [W2]×{y_c}
};

struct SolverConfig {
  Method method = Method::cw;
  CwVariant cw_variant = CwVariant::delta_on_w1;
  NormKind ln_norm = NormKind::max;
  std::size_t series_depth = 20;  // lower bound; raised automatically when ||Jh|| is large
  std::size_t series_cap = 60;
  std::size_t taylor_order = 10;
  double step = 0.01;
  Representation representation = Representation::doubleton;
  RoughEnclosurePolicy rough{};

  void validate() const {
    if (series_depth < 1) throw DomainError("series depth must be at least 1");
    if (series_cap < series_depth) throw DomainError("series cap below series depth");
    if (taylor_order < 1) throw DomainError("Taylor order must be at least 1");
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step size must be positive");
  }
};

struct DeltaResult {
  IVector Delta;  // [-D, D] per coordinate
  PVector D;
  // Log-norm method.
  double l = std::numeric_limits<double>::quiet_NaN();
  // Component-wise method.
  PMatrix J;
  PVector C;
  double remainder = 0.0;
  std::size_t depth = 0;
};

// ---- exp-integral ------------------------------------------------------------------

struct ExpIntegral {
  PVector D;
  std::size_t depth = 0;
  double remainder = 0.0;  // entrywise bound on the truncated series tail
};

/// Upper bound D ≥ ∫₀ʰ e^{J(h-s)} C ds for C ≥ 0, from
/// h·(Σ_{m≤N} A_m + [-r,r])·C with A_0 = I, A_{m+1} = A_m·Jh/(m+2) and
/// r = ||A_N||·||Jh|| / (N+2-||Jh||) in the max norm.
[[nodiscard]] inline ExpIntegral exp_integral_detailed(const PMatrix& J, const PVector& C, double h, std::size_t N,
                                                       std::size_t cap = 60) {
  if (!J.square()) throw NonSquareMatrix("exp_integral requires a square matrix");
  const std::size_t n = J.rows();
  detail::require_same(C.size(), n, "C dimension");
  if (!(h >= 0.0)) throw DomainError("step size must be non-negative");
  for (double c : C)
    if (!(c >= 0.0)) throw DomainError("C must be non-negative");

  IMatrix Ah(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) Ah(i, j) = Interval(J(i, j)) * Interval(h);

  const double a = right(mat_norm(Ah, NormKind::max));
  if (!std::isfinite(a)) throw SeriesDivergence(h, a);
  // Raise the depth until ||Ã||/(N+2) ≤ 1/2; at the cap only ||Ã|| < N+2 is required.
  std::size_t depth = std::max<std::size_t>(N, 1);
  while (depth < cap && a > 0.5 * static_cast<double>(depth + 2)) ++depth;
  if (!(a < static_cast<double>(depth + 2))) throw SeriesDivergence(h, a);

  IMatrix S = IMatrix::identity(n);
  IMatrix Am = IMatrix::identity(n);
  for (std::size_t m = 0; m < depth; ++m) {
    Am = Am * Ah;
    const Interval div(static_cast<double>(m + 2));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) Am(i, j) /= div;
    S = S + Am;
  }
  const double an = right(mat_norm(Am, NormKind::max));
  const Interval denom = Interval(static_cast<double>(depth + 2)) - Interval(a);
  if (!(denom.lo() > 0.0)) throw SeriesDivergence(h, a);
  const double r = right(Interval(an) * Interval(a) / denom);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) S(i, j) += symmetric(r);

  const IVector v = Interval(h) * (S * to_interval(C));
  return ExpIntegral{right(v), depth, r};
}

[[nodiscard]] inline PVector exp_integral(const PMatrix& J, const PVector& C, double h, std::size_t N,
                                          std::size_t cap = 60) {
  return exp_integral_detailed(J, C, h, N, cap).D;
}

namespace detail {

inline Interval phi1_point(double z) {
  const Interval Z(z);
  if (std::abs(z) > 1.0) return (exp(Z) - Interval(1.0)) / Z;
  // Σ_{k≤K} zᵏ/(k+1)! plus a tail bounded by 2|z|^{K+1}/(K+2)!.
  constexpr int K = 20;
  Interval acc(0.0);
  for (int k = K; k >= 0; --k) {
    Interval inv(1.0);
    for (int j = 2; j <= k + 1; ++j) inv /= Interval(static_cast<double>(j));
    acc = acc * Z + inv;
  }
  Interval tail(2.0);
  for (int j = 2; j <= K + 2; ++j) tail /= Interval(static_cast<double>(j));
  for (int j = 0; j <= K; ++j) tail *= Interval(std::abs(z));
  return acc + symmetric(right(tail));
}

}  // namespace detail

/// φ₁(z) = (eᶻ - 1)/z with φ₁(0) = 1, enclosed over an interval. φ₁ is
/// increasing, so the endpoints suffice.
[[nodiscard]] inline Interval phi1(const Interval& z) {
  return Interval(left(detail::phi1_point(z.lo())), right(detail::phi1_point(z.hi())));
}

// ---- δ and Δ ------------------------------------------------------------------------

namespace detail {

inline IVector symmetric_box(const PVector& D) {
  IVector r(D.size());
  for (std::size_t i = 0; i < D.size(); ++i) r[i] = symmetric(D[i]);
  return r;
}

inline void require_nested(const IVector& W1, const IVector& W2) {
  require_same(W1.size(), W2.size(), "W1/W2 dimension");
  if (!subset(W1, W2)) throw DomainError("W1 must be contained in W2");
}

}  // namespace detail

/// Log-norm bound: D = C·h·φ₁(l·h) with C = ||δ||, l = μ(∂f/∂x([W2], y_c)).
[[nodiscard]] inline DeltaResult delta_ln(const PerturbedSystem& sys, const IVector& W1, const IVector& W2,
                                          const PVector& y_c, double h, const SolverConfig& cfg) {
  detail::require_nested(W1, W2);
  const IVector delta = delta_set(sys, W1, y_c);
  const double C = right(vec_norm(delta, cfg.ln_norm));
  const double l = right(lognorm(jacobian_x(sys, W2, to_interval(y_c)), cfg.ln_norm));
  const double D = right(Interval(C) * Interval(h) * phi1(Interval(l) * Interval(h)));

  DeltaResult r;
  r.D = PVector(sys.dimension(), D);
  r.Delta = detail::symmetric_box(r.D);
  r.l = l;
  r.C = PVector(1, C);
  return r;
}

/// Component-wise bound: D = ∫₀ʰ e^{J(h-s)} C ds with C_i = |δ_i|, J_ii = right(∂f_i/∂x_i),
/// J_ij = |∂f_i/∂x_j|.
[[nodiscard]] inline DeltaResult delta_cw(const PerturbedSystem& sys, const IVector& W1, const IVector& W2,
                                          const PVector& y_c, double h, const SolverConfig& cfg) {
  detail::require_nested(W1, W2);
  const std::size_t n = sys.dimension();
  const bool on_w1 = cfg.cw_variant == CwVariant::delta_on_w1;
  const IVector delta = delta_set(sys, on_w1 ? W1 : W2, y_c);
  const IMatrix dfdx = jacobian_x(sys, W2, on_w1 ? sys.perturbation() : to_interval(y_c));

  PMatrix J(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) J(i, j) = i == j ? right(dfdx(i, j)) : mag(dfdx(i, j));
  PVector C(n);
  for (std::size_t i = 0; i < n; ++i) C[i] = mag(delta[i]);

  ExpIntegral e = exp_integral_detailed(J, C, h, cfg.series_depth, cfg.series_cap);
  DeltaResult r;
  r.D = std::move(e.D);
  r.Delta = detail::symmetric_box(r.D);
  r.J = std::move(J);
  r.C = std::move(C);
  r.remainder = e.remainder;
  r.depth = e.depth;
  return r;
}

[[nodiscard]] inline DeltaResult compute_delta(const PerturbedSystem& sys, const IVector& W1, const IVector& W2,
                                               const PVector& y_c, double h, const SolverConfig& cfg) {
  return cfg.method == Method::ln ? delta_ln(sys, W1, W2, y_c, h, cfg) : delta_cw(sys, W1, W2, y_c, h, cfg);
}

// ---- one step --------------------------------------------------------------------------

/// Enclosure of the trajectories over the whole step. Coordinates whose velocity
/// has constant sign on [W2]×[Wy] move monotonically, so the hull of the two
/// endpoint boxes suffices; the others use [W1] + [Δ].
[[nodiscard]] inline IVector between_steps(const PerturbedSystem& sys, const IVector& x_k, const IVector& x_next,
                                           const IVector& W1, const IVector& W2, const IVector& Delta) {
  const std::size_t n = sys.dimension();
  detail::require_same(x_k.size(), n, "x_k dimension");
  detail::require_same(x_next.size(), n, "x_next dimension");
  detail::require_same(Delta.size(), n, "Delta dimension");
  const IVector f = eval_field(sys, W2, sys.perturbation());
  IVector E(n);
  for (std::size_t i = 0; i < n; ++i) {
    E[i] = contains_zero(f[i]) ? W1[i] + Delta[i] : hull(x_k[i], x_next[i]);
    if (auto v = intersect(E[i], W2[i])) E[i] = *v;
  }
  return E;
}

struct StepBundle {
  double t_next = 0.0;
  EnclosureSet set_next;
  IVector W1;
  IVector W2;
  IVector Delta;
  IVector Ek;
  PVector y_c;
};

/// One step x_k → x_{k+1} of the differential inclusion with step cfg.step.
/// Every solution with y(t) ∈ [Wy] starting in `set` is in hull_of(set_next)
/// at t_k + h and in Ek on [t_k, t_k + h].
[[nodiscard]] inline StepBundle inclusion_step(const PerturbedSystem& sys, const EnclosureSet& set, double t_k,
                                               const SolverConfig& cfg) {
  cfg.validate();
  const double h = cfg.step;
  const IVector X = hull_of(set);
  const IVector& Wy = sys.perturbation();

  const IVector W2 = rough_enclosure(sys, X, h, Wy, cfg.rough);
  const PVector y_c = mid(Wy);
  UnperturbedStep u = unperturbed_step(sys, set, h, y_c, cfg.taylor_order, cfg.rough, W2);
  IVector W1 = u.W1;
  if (auto w = intersect(W1, W2)) W1 = *w;

  const DeltaResult d = compute_delta(sys, W1, W2, y_c, h, cfg);
  EnclosureSet next = rearrange(u.set_next, d.Delta);
  IVector Ek = between_steps(sys, X, hull_of(next), W1, W2, d.Delta);
  return StepBundle{t_k + h, std::move(next), std::move(W1), W2, d.Delta, std::move(Ek), y_c};
}

// ---- trajectories ------------------------------------------------------------------------

using StepObserver = std::function<void(std::size_t step, const StepBundle&)>;
/// Returns the perturbation bound to use for the next step (time-varying [Wy]).
using PerturbationUpdate = std::function<IVector(const StepBundle&)>;

/// Runs `steps` inclusion steps from `set` at time t0. Integration errors are
/// stamped with the index of the failing step.
[[nodiscard]] inline EnclosureSet integrate(PerturbedSystem sys, EnclosureSet set, double t0, std::size_t steps,
                                            const SolverConfig& cfg, const StepObserver& observe = {},
                                            const PerturbationUpdate& update = {}) {
  double t = t0;
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      StepBundle b = inclusion_step(sys, set, t, cfg);
      if (observe) observe(k, b);
      if (update) sys = sys.with_perturbation(update(b));
      t = b.t_next;
      set = std::move(b.set_next);
    } catch (IntegrationError& e) {
      e.set_step_index(k);
      throw;
    }
  }
  return set;
}

}  // namespace incluso
