/**
 * @file lohner.hpp
 * @brief C⁰ Lohner machinery for the unperturbed flow: set representations,
 *        rough enclosure, Taylor step with remainder and rearrangement.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <variant>

#include "incluso/errors.hpp"
#include "incluso/interval.hpp"
#include "incluso/linalg.hpp"
#include "incluso/system.hpp"
#include "incluso/taylor.hpp"

namespace incluso {

enum class Representation { box, doubleton, quadruple };

[[nodiscard]] inline const char* to_string(Representation r) {
  switch (r) {
    case Representation::box:
      return "box";
    case Representation::doubleton:
      return "doubleton";
    case Representation::quadruple:
      return "quadruple";
  }
  return "?";
}

struct BoxSet {
  IVector x;
};

/// x + B·r, with `Binv` an enclosure of B⁻¹.
struct Doubleton {
  PVector x;
  IMatrix B;
  IMatrix Binv;
  IVector r;
};

/// x + C·r0 + B·r. C and r0 carry the initial set through the linear part of the
/// flow, B·r collects everything else.
struct Quadruple {
  PVector x;
  PMatrix C;
  IVector r0;
  IMatrix B;
  IMatrix Binv;
  IVector r;
};

using EnclosureSet = std::variant<BoxSet, Doubleton, Quadruple>;

[[nodiscard]] inline Representation representation(const EnclosureSet& s) {
  return static_cast<Representation>(s.index());
}

[[nodiscard]] inline std::size_t dimension(const EnclosureSet& s) {
  return std::visit([](const auto& v) { return v.x.size(); }, s);
}

[[nodiscard]] inline EnclosureSet make_set(const IVector& x0, Representation rep) {
  const std::size_t n = x0.size();
  const PVector c = mid(x0);
  switch (rep) {
    case Representation::box:
      return BoxSet{x0};
    case Representation::doubleton: {
      const IMatrix id = IMatrix::identity(n);
      return Doubleton{c, id, id, x0 - to_interval(c)};
    }
    case Representation::quadruple: {
      const IMatrix id = IMatrix::identity(n);
      return Quadruple{c, PMatrix::identity(n), x0 - to_interval(c), id, id, IVector(n, Interval(0.0))};
    }
  }
  throw DomainError("unknown representation");
}

/// Interval box enclosing the represented set.
[[nodiscard]] inline IVector hull_of(const EnclosureSet& s) {
  struct Visitor {
    IVector operator()(const BoxSet& b) const { return b.x; }
    IVector operator()(const Doubleton& d) const { return to_interval(d.x) + d.B * d.r; }
    IVector operator()(const Quadruple& q) const {
      return to_interval(q.x) + (to_interval(q.C) * q.r0 + q.B * q.r);
    }
  };
  return std::visit(Visitor{}, s);
}

// ---- rough enclosure ---------------------------------------------------------

struct RoughEnclosurePolicy {
  double inflation = 1.5;
  double abs_epsilon = 1e-10;
  int max_retries = 20;
};

namespace detail {

inline IVector inflate(const IVector& v, const RoughEnclosurePolicy& p) {
  IVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double c = mid(v[i]);
    const double w = rounding::add_up(rounding::mul_up(p.inflation, rad(v[i])), p.abs_epsilon);
    r[i] = Interval(rounding::sub_down(c, w), rounding::add_up(c, w));
  }
  return r;
}

}  // namespace detail

/// Box containing every trajectory through `x` on [0,h] for y(t) ∈ ybox,
/// validated by the Picard test x + [0,h]·f(W, ybox) ⊆ W.
[[nodiscard]] inline IVector rough_enclosure(const PerturbedSystem& sys, const IVector& x, double h, const IVector& ybox,
                                             const RoughEnclosurePolicy& policy = {}) {
  if (!(h > 0.0)) throw DomainError("step size must be positive");
  const Interval span = zero_to(h);
  auto picard = [&](const IVector& w) { return x + span * eval_field(sys, w, ybox); };
  IVector w = picard(x);
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
    IVector next;
    try {
      next = picard(w);
    } catch (const DomainError&) {
      throw RoughEnclosureFailure(h, attempt);
    }
    if (subset(next, w)) return next;
    w = detail::inflate(next, policy);
  }
  throw RoughEnclosureFailure(h, policy.max_retries);
}

[[nodiscard]] inline IVector rough_enclosure(const PerturbedSystem& sys, const EnclosureSet& set, double h,
                                             const IVector& ybox, const RoughEnclosurePolicy& policy = {}) {
  return rough_enclosure(sys, hull_of(set), h, ybox, policy);
}

// ---- unperturbed step ----------------------------------------------------------

struct UnperturbedStep {
  EnclosureSet set_next;
  IVector W1;     // φ̄([0,h], set, y_c)
  IVector rough;  // validated rough enclosure used for the remainder
};

namespace detail {

inline IVector box_of(const std::vector<Interval>& v) { return IVector(v); }

inline IVector remainder_term(const SeriesCoeffs<Interval>& cw, std::size_t p, const Interval& hpow) {
  IVector r(cw[p + 1].size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = cw[p + 1][i] * hpow;
  return r;
}

// Interval Taylor polynomial Φ(h, x_c) at a point.
inline IVector point_image(const PerturbedSystem& sys, const PVector& xc, const IVector& yc, std::size_t p,
                           const Interval& h) {
  const IVector x = to_interval(xc);
  const auto c = taylor_series<Interval>(sys.field_tape(), x.span(), yc.span(), p);
  return horner(c, h);
}

struct PolyBounds {
  IMatrix jac;          // DΦ(h, ·) over the box
  SeriesCoeffs<Interval> values;  // c^k over the box, k = 0..p
};

inline PolyBounds jacobian_of_polynomial(const PerturbedSystem& sys, const IVector& box, const IVector& yc,
                                         std::size_t p, const Interval& h) {
  const std::size_t n = box.size();
  std::vector<Jet> x0;
  x0.reserve(n);
  for (std::size_t i = 0; i < n; ++i) x0.push_back(Jet::seed(box[i], n, i));
  std::vector<Jet> y;
  y.reserve(yc.size());
  for (const auto& v : yc) y.emplace_back(v);
  const auto c = taylor_series<Jet>(sys.field_tape(), std::span<const Jet>(x0), std::span<const Jet>(y), p);

  PolyBounds out{IMatrix(n, n), SeriesCoeffs<Interval>(p + 1, std::vector<Interval>(n))};
  for (std::size_t k = 0; k <= p; ++k)
    for (std::size_t i = 0; i < n; ++i) out.values[k][i] = c[k][i].v;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Interval acc(0.0);
      for (std::size_t k = p + 1; k-- > 0;) {
        const Interval g = c[k][i].g.empty() ? Interval(0.0) : c[k][i].g[j];
        acc = acc * h + g;
      }
      out.jac(i, j) = acc;
    }
  }
  return out;
}

inline IMatrix refreshed_inverse(const PMatrix& q) { return inverse_enclosure(q, q.transpose()); }

// New orthogonal basis from the propagated one; columns ordered by their
// contribution ||mid(A)_j||·diam(r_j).
inline PMatrix next_basis(const IMatrix& a, const IVector& r) {
  const PMatrix m = mid(a);
  PVector w(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j) * m(i, j);
    w[j] = std::sqrt(s) * incluso::diam(r[j]);
  }
  return orthogonal_factor(m, w);
}

}  // namespace detail

/// One step of the unperturbed flow x' = f(x, y_c) by a Taylor method of order p.
///
/// The flow is split as φ̄(h, x) ∈ Φ(x) + R, where Φ is the Taylor polynomial and
/// R = c^{p+1}(W)·h^{p+1} is evaluated over the rough enclosure W. Φ is
/// propagated through the set by the mean-value form with DΦ enclosed over the
/// hull of the set. `hint`, if given, is any box known to contain φ̄([0,h], set)
/// and is intersected with the computed rough enclosure.
[[nodiscard]] inline UnperturbedStep unperturbed_step(const PerturbedSystem& sys, const EnclosureSet& set, double h,
                                                      const PVector& y_c, std::size_t p,
                                                      const RoughEnclosurePolicy& policy = {},
                                                      const std::optional<IVector>& hint = std::nullopt) {
  if (p < 1) throw DomainError("Taylor order must be at least 1");
  const std::size_t n = sys.dimension();
  detail::require_same(dimension(set), n, "set dimension");
  const IVector yc = to_interval(y_c);
  const IVector X = hull_of(set);

  IVector W;
  try {
    W = rough_enclosure(sys, X, h, yc, policy);
    if (hint) {
      if (auto w = intersect(W, *hint)) W = *w;
    }
  } catch (const RoughEnclosureFailure&) {
    if (!hint) throw;
    W = *hint;
  }

  const Interval H(h);
  const Interval span = zero_to(h);
  Interval hp = Interval(1.0);
  for (std::size_t k = 0; k <= p; ++k) hp *= H;
  Interval sp = Interval(1.0);
  for (std::size_t k = 0; k <= p; ++k) sp *= span;

  const auto cw = taylor_series<Interval>(sys.field_tape(), W.span(), yc.span(), p + 1);
  const IVector rem = detail::remainder_term(cw, p, hp);
  const IVector rem_range = detail::remainder_term(cw, p, sp);

  const detail::PolyBounds poly = detail::jacobian_of_polynomial(sys, X, yc, p, H);

  // W1: Taylor polynomial over the set for t ∈ [0,h] plus the remainder over W.
  IVector W1 = horner(poly.values, span) + rem_range;
  if (auto w = intersect(W1, W)) W1 = *w;

  const IVector naive = horner(poly.values, H) + rem;

  struct Visitor {
    const PerturbedSystem& sys;
    const IVector& yc;
    std::size_t p;
    const Interval& H;
    const IVector& rem;
    const IVector& naive;
    const IVector& W;
    const IMatrix& D;

    EnclosureSet operator()(const BoxSet& b) const {
      const PVector c = mid(b.x);
      IVector y = detail::point_image(sys, c, yc, p, H) + rem + D * (b.x - to_interval(c));
      if (auto v = intersect(y, naive)) y = *v;
      if (auto v = intersect(y, W)) y = *v;
      return BoxSet{y};
    }

    EnclosureSet operator()(const Doubleton& d) const {
      const IVector y = detail::point_image(sys, d.x, yc, p, H) + rem;
      const IMatrix A = D * d.B;
      const PMatrix q = detail::next_basis(A, d.r);
      const IMatrix qi = detail::refreshed_inverse(q);
      const PVector xn = mid(y);
      const IVector r = (qi * A) * d.r + qi * (y - to_interval(xn));
      return Doubleton{xn, to_interval(q), qi, r};
    }

    EnclosureSet operator()(const Quadruple& s) const {
      const IMatrix DC = D * to_interval(s.C);
      const PMatrix cn = mid(DC);
      const IVector y = detail::point_image(sys, s.x, yc, p, H) + rem + (DC - to_interval(cn)) * s.r0;
      const IMatrix A = D * s.B;
      const PMatrix q = detail::next_basis(A, s.r);
      const IMatrix qi = detail::refreshed_inverse(q);
      const PVector xn = mid(y);
      const IVector r = (qi * A) * s.r + qi * (y - to_interval(xn));
      return Quadruple{xn, cn, s.r0, to_interval(q), qi, r};
    }
  };

  EnclosureSet next = std::visit(Visitor{sys, yc, p, H, rem, naive, W, poly.jac}, set);
  return UnperturbedStep{std::move(next), std::move(W1), std::move(W)};
}

// ---- rearrangement ---------------------------------------------------------------

/// Adds the perturbation box Δ to the set: the center moves to m(x̄ + Δ) and the
/// leftover is absorbed into r̃ through B⁻¹.
[[nodiscard]] inline EnclosureSet rearrange(const EnclosureSet& set_bar, const IVector& delta) {
  detail::require_same(delta.size(), dimension(set_bar), "Delta dimension");
  struct Visitor {
    const IVector& delta;

    EnclosureSet operator()(const BoxSet& b) const { return BoxSet{b.x + delta}; }

    EnclosureSet operator()(Doubleton d) const {
      const IVector s = to_interval(d.x) + delta;
      const PVector xn = mid(s);
      d.r = d.r + d.Binv * (s - to_interval(xn));
      d.x = xn;
      return d;
    }

    EnclosureSet operator()(Quadruple q) const {
      const IVector s = to_interval(q.x) + delta;
      const PVector xn = mid(s);
      q.r = q.r + q.Binv * (s - to_interval(xn));
      q.x = xn;
      return q;
    }
  };
  return std::visit(Visitor{delta}, set_bar);
}

}  // namespace incluso
