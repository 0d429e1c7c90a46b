/**
 * @file interval.hpp
 * @brief Outward-rounded interval scalars over binary64.
 *
 * The FPU stays in round-to-nearest. Every operation computes the nearest
 * result and then moves each endpoint by at most one ulp, using error-free
 * transformations (TwoSum, FMA residuals) to detect whether the rounded value
 * was exact. Exact results therefore stay exact, and inexact ones become the
 * correctly directed-rounded bound.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "incluso/errors.hpp"

namespace incluso {

namespace rounding {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kMax = std::numeric_limits<double>::max();
// Below this magnitude FMA residuals may be rounded by underflow.
inline constexpr double kTiny = 0x1p-900;

[[nodiscard]] inline double next_up(double x) { return std::nextafter(x, kInf); }
[[nodiscard]] inline double next_down(double x) { return std::nextafter(x, -kInf); }

// Overflowed or NaN results become the loosest valid bound.
[[nodiscard]] inline double finish_up(double r, bool finite_inputs) {
  if (std::isnan(r)) return kInf;
  if (r == -kInf && finite_inputs) return -kMax;
  return r;
}
[[nodiscard]] inline double finish_down(double r, bool finite_inputs) {
  if (std::isnan(r)) return -kInf;
  if (r == kInf && finite_inputs) return kMax;
  return r;
}

// Rounding error of s = fl(a + b): a + b == s + err exactly (Knuth TwoSum).
[[nodiscard]] inline double two_sum_error(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

[[nodiscard]] inline double add_up(double a, double b) {
  const double s = a + b;
  const bool fin = std::isfinite(a) && std::isfinite(b);
  if (!std::isfinite(s)) return finish_up(s, fin);
  return two_sum_error(a, b, s) > 0.0 ? next_up(s) : s;
}

[[nodiscard]] inline double add_down(double a, double b) {
  const double s = a + b;
  const bool fin = std::isfinite(a) && std::isfinite(b);
  if (!std::isfinite(s)) return finish_down(s, fin);
  return two_sum_error(a, b, s) < 0.0 ? next_down(s) : s;
}

[[nodiscard]] inline double sub_up(double a, double b) { return add_up(a, -b); }
[[nodiscard]] inline double sub_down(double a, double b) { return add_down(a, -b); }

[[nodiscard]] inline double mul_up(double a, double b) {
  const double p = a * b;
  const bool fin = std::isfinite(a) && std::isfinite(b);
  if (!std::isfinite(p)) return finish_up(p, fin);
  if (a == 0.0 || b == 0.0) return p;
  if (std::abs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

[[nodiscard]] inline double mul_down(double a, double b) {
  const double p = a * b;
  const bool fin = std::isfinite(a) && std::isfinite(b);
  if (!std::isfinite(p)) return finish_down(p, fin);
  if (a == 0.0 || b == 0.0) return p;
  if (std::abs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

// Sign of the residual a - q*b decides on which side of q the exact quotient lies.
[[nodiscard]] inline double div_up(double a, double b) {
  const double q = a / b;
  const bool fin = std::isfinite(a) && std::isfinite(b);
  if (!std::isfinite(q)) return finish_up(q, fin);
  if (a == 0.0) return q;
  if (!std::isfinite(b)) return next_up(q);
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return next_up(q);
  const double r = std::fma(-q, b, a);
  if (r == 0.0) return q;
  return ((r > 0.0) == (b > 0.0)) ? next_up(q) : q;
}

[[nodiscard]] inline double div_down(double a, double b) {
  const double q = a / b;
  const bool fin = std::isfinite(a) && std::isfinite(b);
  if (!std::isfinite(q)) return finish_down(q, fin);
  if (a == 0.0) return q;
  if (!std::isfinite(b)) return next_down(q);
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return next_down(q);
  const double r = std::fma(-q, b, a);
  if (r == 0.0) return q;
  return ((r > 0.0) == (b > 0.0)) ? q : next_down(q);
}

[[nodiscard]] inline double sqrt_up(double x) {
  const double s = std::sqrt(x);
  if (!std::isfinite(s) || s == 0.0) return s;
  if (s < kTiny) return next_up(s);
  return std::fma(-s, s, x) > 0.0 ? next_up(s) : s;
}

[[nodiscard]] inline double sqrt_down(double x) {
  const double s = std::sqrt(x);
  if (!std::isfinite(s) || s == 0.0) return s;
  if (s < kTiny) return next_down(s);
  return std::fma(-s, s, x) < 0.0 ? next_down(s) : s;
}

}  // namespace rounding

/// Closed interval [lo, hi] of reals with binary64 endpoints.
class Interval {
 public:
  constexpr Interval() noexcept = default;

  // NOLINTNEXTLINE(google-explicit-constructor): points promote to thin intervals.
  Interval(double v) : lo_(v), hi_(v) {
    if (std::isnan(v)) throw InvalidInterval("NaN endpoint");
  }

  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi)) throw InvalidInterval("NaN endpoint");
    if (lo > hi) throw InvalidInterval("lower endpoint exceeds upper endpoint");
  }

  [[nodiscard]] static Interval whole() noexcept {
    Interval r;
    r.lo_ = -rounding::kInf;
    r.hi_ = rounding::kInf;
    return r;
  }

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  // Internal constructor that skips validation; endpoints come from rounding helpers.
  struct Raw {};
  Interval(Raw, double lo, double hi) noexcept : lo_(lo), hi_(hi) {}

  friend Interval make_raw(double lo, double hi) noexcept;

  double lo_ = 0.0;
  double hi_ = 0.0;
};

[[nodiscard]] inline Interval make_raw(double lo, double hi) noexcept { return Interval(Interval::Raw{}, lo, hi); }

[[nodiscard]] inline double left(const Interval& a) noexcept { return a.lo(); }
[[nodiscard]] inline double right(const Interval& a) noexcept { return a.hi(); }

/// Midpoint, guaranteed to lie in the interval.
[[nodiscard]] inline double mid(const Interval& a) noexcept {
  if (a.lo() == -rounding::kInf && a.hi() == rounding::kInf) return 0.0;
  if (a.lo() == -rounding::kInf) return -rounding::kMax;
  if (a.hi() == rounding::kInf) return rounding::kMax;
  const double m = 0.5 * a.lo() + 0.5 * a.hi();
  return std::clamp(m, a.lo(), a.hi());
}

/// Width, rounded up.
[[nodiscard]] inline double diam(const Interval& a) noexcept { return rounding::sub_up(a.hi(), a.lo()); }

/// Radius about mid(a), rounded up; encloses every point's distance to mid(a).
[[nodiscard]] inline double rad(const Interval& a) noexcept {
  const double m = mid(a);
  return std::max(rounding::sub_up(a.hi(), m), rounding::sub_up(m, a.lo()));
}

[[nodiscard]] inline double mag(const Interval& a) noexcept { return std::max(std::abs(a.lo()), std::abs(a.hi())); }

[[nodiscard]] inline double mig(const Interval& a) noexcept {
  if (a.lo() <= 0.0 && a.hi() >= 0.0) return 0.0;
  return std::min(std::abs(a.lo()), std::abs(a.hi()));
}

[[nodiscard]] inline bool contains(const Interval& a, double x) noexcept { return a.lo() <= x && x <= a.hi(); }
[[nodiscard]] inline bool contains_zero(const Interval& a) noexcept { return contains(a, 0.0); }

/// True when inner ⊆ outer.
[[nodiscard]] inline bool subset(const Interval& inner, const Interval& outer) noexcept {
  return outer.lo() <= inner.lo() && inner.hi() <= outer.hi();
}

[[nodiscard]] inline bool is_thin(const Interval& a) noexcept { return a.lo() == a.hi(); }

[[nodiscard]] inline Interval hull(const Interval& a, const Interval& b) noexcept {
  return make_raw(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

[[nodiscard]] inline std::optional<Interval> intersect(const Interval& a, const Interval& b) noexcept {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return make_raw(lo, hi);
}

[[nodiscard]] inline Interval operator-(const Interval& a) noexcept { return make_raw(-a.hi(), -a.lo()); }

[[nodiscard]] inline Interval operator+(const Interval& a, const Interval& b) noexcept {
  return make_raw(rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi()));
}

[[nodiscard]] inline Interval operator-(const Interval& a, const Interval& b) noexcept {
  return make_raw(rounding::sub_down(a.lo(), b.hi()), rounding::sub_up(a.hi(), b.lo()));
}

[[nodiscard]] inline Interval operator*(const Interval& a, const Interval& b) noexcept {
  using namespace rounding;
  if ((a.lo() == 0.0 && a.hi() == 0.0) || (b.lo() == 0.0 && b.hi() == 0.0)) return Interval{};
  const double lo = std::min({mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()), mul_down(a.hi(), b.lo()),
                              mul_down(a.hi(), b.hi())});
  const double hi = std::max({mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()), mul_up(a.hi(), b.lo()),
                              mul_up(a.hi(), b.hi())});
  return make_raw(lo, hi);
}

/// Division; throws DivisionByZeroInterval when 0 ∈ b.
[[nodiscard]] inline Interval operator/(const Interval& a, const Interval& b) {
  using namespace rounding;
  if (contains_zero(b)) throw DivisionByZeroInterval();
  const double lo = std::min({div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi()), div_down(a.hi(), b.lo()),
                              div_down(a.hi(), b.hi())});
  const double hi = std::max({div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi()), div_up(a.hi(), b.lo()),
                              div_up(a.hi(), b.hi())});
  return make_raw(lo, hi);
}

inline Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
inline Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
inline Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
inline Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

enum class ArithOp { add, sub, mul, div };

[[nodiscard]] inline Interval arith(const Interval& a, const Interval& b, ArithOp op) {
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::mul:
      return a * b;
    case ArithOp::div:
      return a / b;
  }
  return Interval::whole();
}

[[nodiscard]] inline Interval abs(const Interval& a) noexcept { return make_raw(mig(a), mag(a)); }

/// Tight square (the dependency between factors is respected).
[[nodiscard]] inline Interval sqr(const Interval& a) noexcept {
  const double m = mig(a);
  const double M = mag(a);
  return make_raw(m == 0.0 ? 0.0 : rounding::mul_down(m, m), rounding::mul_up(M, M));
}

[[nodiscard]] inline Interval sqrt(const Interval& a) {
  if (a.lo() < 0.0) throw DomainError("sqrt of an interval with negative part");
  return make_raw(rounding::sqrt_down(a.lo()), rounding::sqrt_up(a.hi()));
}

// std::exp is faithful to within one ulp on the supported platforms; two ulps of
// padding keep the enclosure valid.
[[nodiscard]] inline Interval exp(const Interval& a) noexcept {
  using rounding::next_down;
  using rounding::next_up;
  double lo = next_down(next_down(std::exp(a.lo())));
  double hi = next_up(next_up(std::exp(a.hi())));
  if (lo < 0.0) lo = 0.0;
  return make_raw(lo, hi);
}

/// Symmetric interval [-r, r].
[[nodiscard]] inline Interval symmetric(double r) { return Interval(-r, r); }

[[nodiscard]] inline Interval max(const Interval& a, const Interval& b) noexcept {
  return make_raw(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

[[nodiscard]] inline Interval min(const Interval& a, const Interval& b) noexcept {
  return make_raw(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

/// Hull of [0, hi]; used for time ranges [0, h].
[[nodiscard]] inline Interval zero_to(double hi) { return Interval(std::min(0.0, hi), std::max(0.0, hi)); }

inline std::ostream& operator<<(std::ostream& os, const Interval& a) {
  return os << '[' << a.lo() << ", " << a.hi() << ']';
}

}  // namespace incluso
