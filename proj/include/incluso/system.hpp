/**
 * @file system.hpp
 * @brief Perturbed systems x' = f(x, y) with y(t) ∈ [Wy].
 *
 * Two field kinds are supported:
 *  - additive: f(x, y) = g(x) + y with m = n (the differential inclusion x' ∈ g(x) + [Wy]);
 *  - general:  f(x, y) given as an arbitrary expression in x and y.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "incluso/errors.hpp"
#include "incluso/expr.hpp"
#include "incluso/interval.hpp"
#include "incluso/linalg.hpp"
#include "incluso/taylor.hpp"

namespace incluso {

namespace detail {

inline void require_bounded(const IVector& wy) {
  for (std::size_t i = 0; i < wy.size(); ++i)
    if (!std::isfinite(wy[i].lo()) || !std::isfinite(wy[i].hi()))
      throw DomainError("perturbation bound y" + std::to_string(i + 1) + " is unbounded");
}

}  // namespace detail

enum class FieldKind { additive, general };

class PerturbedSystem {
 public:
  /// x' = g(x) + y, y(t) ∈ perturbation. `g` must only reference x1..xn.
  [[nodiscard]] static PerturbedSystem additive(std::vector<Expr> g, IVector perturbation) {
    const std::size_t n = g.size();
    detail::require_same(perturbation.size(), n, "additive perturbation dimension");
    for (const auto& gi : g) {
      std::size_t nx = 0;
      std::size_t ny = 0;
      variable_extent(gi, nx, ny);
      if (nx > n) throw DimensionMismatch("field references x" + std::to_string(nx) + " in dimension " + std::to_string(n));
      if (ny > 0) throw DimensionMismatch("additive field components may not reference y");
    }
    std::vector<Expr> f;
    f.reserve(n);
    for (std::size_t i = 0; i < n; ++i) f.push_back(g[i] + Expr::y(i));
    return PerturbedSystem(FieldKind::additive, n, n, std::move(g), std::move(f), std::move(perturbation));
  }

  /// x' = f(x, y), x ∈ R^n, y ∈ R^m, y(t) ∈ perturbation.
  [[nodiscard]] static PerturbedSystem general(std::size_t n, std::size_t m, std::vector<Expr> f, IVector perturbation) {
    detail::require_same(f.size(), n, "field dimension");
    detail::require_same(perturbation.size(), m, "perturbation dimension");
    for (const auto& fi : f) {
      std::size_t nx = 0;
      std::size_t ny = 0;
      variable_extent(fi, nx, ny);
      if (nx > n || ny > m) throw DimensionMismatch("field references a variable outside x1..xn, y1..ym");
    }
    return PerturbedSystem(FieldKind::general, n, m, {}, std::move(f), std::move(perturbation));
  }

  /// Parses one expression per component of g; see expr.hpp for the grammar.
  [[nodiscard]] static PerturbedSystem parse_additive(std::span<const std::string> g, IVector perturbation) {
    std::vector<Expr> e;
    for (const auto& s : g) e.push_back(parse_expression(s, g.size(), 0));
    return additive(std::move(e), std::move(perturbation));
  }

  [[nodiscard]] static PerturbedSystem parse_general(std::span<const std::string> f, std::size_t m,
                                                     IVector perturbation) {
    std::vector<Expr> e;
    for (const auto& s : f) e.push_back(parse_expression(s, f.size(), m));
    return general(f.size(), m, std::move(e), std::move(perturbation));
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return n_; }
  [[nodiscard]] std::size_t perturbation_dimension() const noexcept { return m_; }
  [[nodiscard]] FieldKind kind() const noexcept { return kind_; }
  [[nodiscard]] const IVector& perturbation() const noexcept { return wy_; }
  [[nodiscard]] const std::vector<Expr>& field() const noexcept { return f_; }

  /// Same field with a different perturbation bound.
  [[nodiscard]] PerturbedSystem with_perturbation(IVector wy) const {
    detail::require_same(wy.size(), m_, "perturbation dimension");
    detail::require_bounded(wy);
    PerturbedSystem s = *this;
    s.wy_ = std::move(wy);
    return s;
  }

  [[nodiscard]] const Tape& field_tape() const noexcept { return tapes_->field; }
  [[nodiscard]] const Tape& jacobian_x_tape() const noexcept { return tapes_->jac_x; }
  [[nodiscard]] const Tape& jacobian_y_tape() const noexcept { return tapes_->jac_y; }

 private:
  struct Tapes {
    Tape field;
    Tape jac_x;  // row-major n x n
    Tape jac_y;  // row-major n x m
  };

  PerturbedSystem(FieldKind kind, std::size_t n, std::size_t m, std::vector<Expr> g, std::vector<Expr> f, IVector wy)
      : kind_(kind), n_(n), m_(m), g_(std::move(g)), f_(std::move(f)), wy_(std::move(wy)) {
    detail::require_bounded(wy_);
    auto t = std::make_shared<Tapes>();
    t->field = Tape(f_);
    std::vector<Expr> dx;
    std::vector<Expr> dy;
    dx.reserve(n_ * n_);
    dy.reserve(n_ * m_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) dx.push_back(derivative(f_[i], OpKind::var_x, j));
      for (std::size_t j = 0; j < m_; ++j) dy.push_back(derivative(f_[i], OpKind::var_y, j));
    }
    t->jac_x = Tape(dx);
    t->jac_y = Tape(dy);
    tapes_ = std::move(t);
  }

  FieldKind kind_;
  std::size_t n_;
  std::size_t m_;
  std::vector<Expr> g_;
  std::vector<Expr> f_;
  IVector wy_;
  std::shared_ptr<const Tapes> tapes_;
};

namespace detail {

inline void check_args(const PerturbedSystem& sys, const IVector& x, const IVector& y) {
  require_same(x.size(), sys.dimension(), "state dimension");
  require_same(y.size(), sys.perturbation_dimension(), "perturbation dimension");
}

}  // namespace detail

/// Encloses { f(x, y) : x ∈ [x], y ∈ [y] }. Throws DomainError.
[[nodiscard]] inline IVector eval_field(const PerturbedSystem& sys, const IVector& x, const IVector& y) {
  detail::check_args(sys, x, y);
  return IVector(sys.field_tape().evaluate(x.span(), y.span()));
}

[[nodiscard]] inline IMatrix jacobian_x(const PerturbedSystem& sys, const IVector& x, const IVector& y) {
  detail::check_args(sys, x, y);
  const auto v = sys.jacobian_x_tape().evaluate(x.span(), y.span());
  const std::size_t n = sys.dimension();
  IMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = v[i * n + j];
  return r;
}

[[nodiscard]] inline IMatrix jacobian_y(const PerturbedSystem& sys, const IVector& x, const IVector& y) {
  detail::check_args(sys, x, y);
  const std::size_t n = sys.dimension();
  const std::size_t m = sys.perturbation_dimension();
  if (sys.kind() == FieldKind::additive) return IMatrix::identity(n);
  const auto v = sys.jacobian_y_tape().evaluate(x.span(), y.span());
  IMatrix r(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) r(i, j) = v[i * m + j];
  return r;
}

/// Normalised Taylor coefficients c^0..c^p of solutions of x' = f(x, y_c) through [x].
struct TaylorCoeffs {
  std::size_t order = 0;
  SeriesCoeffs<Interval> c;

  [[nodiscard]] IVector operator[](std::size_t k) const { return IVector(c[k]); }
};

[[nodiscard]] inline TaylorCoeffs taylor_coefficients(const PerturbedSystem& sys, const IVector& x, const IVector& y_c,
                                                      std::size_t order) {
  detail::check_args(sys, x, y_c);
  if (order < 1) throw DomainError("Taylor order must be at least 1");
  return TaylorCoeffs{order, taylor_series<Interval>(sys.field_tape(), x.span(), y_c.span(), order)};
}

[[nodiscard]] inline TaylorCoeffs taylor_coefficients(const PerturbedSystem& sys, const IVector& x, const PVector& y_c,
                                                      std::size_t order) {
  return taylor_coefficients(sys, x, to_interval(y_c), order);
}

/// Encloses { f(x, y_c) - f(x, y) : x ∈ xbox, y ∈ [Wy] } without subtracting two
/// independent field enclosures: additive fields give y_c - [Wy] exactly, general
/// fields use the mean-value form ∂f/∂y(xbox, [Wy]) · (y_c - [Wy]).
[[nodiscard]] inline IVector delta_set(const PerturbedSystem& sys, const IVector& xbox, const PVector& y_c) {
  const IVector& wy = sys.perturbation();
  detail::require_same(y_c.size(), wy.size(), "y_c dimension");
  if (!contains(wy, y_c)) throw DomainError("y_c must lie in the perturbation bound");
  const IVector diff = to_interval(y_c) - wy;
  if (sys.kind() == FieldKind::additive) return diff;
  return jacobian_y(sys, xbox, wy) * diff;
}

}  // namespace incluso
