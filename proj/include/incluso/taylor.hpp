/**
 * @file taylor.hpp
 * @brief Normalised Taylor coefficients of solutions of x' = f(x, y_const),
 *        generic over the coefficient scalar.
 *
 * With T = Interval the recursion encloses x^(k)(0)/k! over a box of initial
 * conditions. With T = Jet it additionally carries d c^k / d x0, i.e. the
 * Taylor coefficients of the variational equation.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "incluso/expr.hpp"
#include "incluso/interval.hpp"
#include "incluso/linalg.hpp"

namespace incluso {

/// Interval value together with an interval gradient. An empty gradient stands for zero.
struct Jet {
  Interval v{};
  std::vector<Interval> g;

  Jet() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  Jet(const Interval& value) : v(value) {}
  Jet(const Interval& value, std::vector<Interval> grad) : v(value), g(std::move(grad)) {}

  [[nodiscard]] static Jet seed(const Interval& value, std::size_t n, std::size_t i) {
    std::vector<Interval> g(n, Interval(0.0));
    g[i] = Interval(1.0);
    return Jet(value, std::move(g));
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r(a.v + b.v);
    if (a.g.empty()) {
      r.g = b.g;
    } else if (b.g.empty()) {
      r.g = a.g;
    } else {
      r.g.resize(a.g.size());
      for (std::size_t i = 0; i < a.g.size(); ++i) r.g[i] = a.g[i] + b.g[i];
    }
    return r;
  }

  friend Jet operator-(const Jet& a) {
    Jet r(-a.v);
    r.g.reserve(a.g.size());
    for (const auto& x : a.g) r.g.push_back(-x);
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    if (b.g.empty()) return Jet(a.v - b.v, a.g);
    Jet r(a.v - b.v);
    r.g.resize(b.g.size());
    for (std::size_t i = 0; i < b.g.size(); ++i) r.g[i] = a.g.empty() ? -b.g[i] : a.g[i] - b.g[i];
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v * b.v);
    const std::size_t n = std::max(a.g.size(), b.g.size());
    if (n == 0) return r;
    r.g.assign(n, Interval(0.0));
    if (!a.g.empty())
      for (std::size_t i = 0; i < n; ++i) r.g[i] += a.g[i] * b.v;
    if (!b.g.empty())
      for (std::size_t i = 0; i < n; ++i) r.g[i] += a.v * b.g[i];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    const Interval q = a.v / b.v;
    Jet r(q);
    const std::size_t n = std::max(a.g.size(), b.g.size());
    if (n == 0) return r;
    r.g.assign(n, Interval(0.0));
    for (std::size_t i = 0; i < n; ++i) {
      Interval num = a.g.empty() ? Interval(0.0) : a.g[i];
      if (!b.g.empty()) num -= q * b.g[i];
      r.g[i] = num / b.v;
    }
    return r;
  }
};

/// coeffs[k][i] = k-th normalised Taylor coefficient of component i, k = 0..order.
template <class T>
using SeriesCoeffs = std::vector<std::vector<T>>;

/// Taylor recursion through `field` (a tape with n outputs over x1..xn, y1..ym)
/// holding the perturbation variables constant at `y`.
template <class T>
[[nodiscard]] SeriesCoeffs<T> taylor_series(const Tape& field, std::span<const T> x0, std::span<const T> y,
                                            std::size_t order) {
  const auto code = field.code();
  const std::size_t n = x0.size();
  SeriesCoeffs<T> xc(order + 1, std::vector<T>(n));
  for (std::size_t i = 0; i < n; ++i) xc[0][i] = x0[i];

  // nc[slot][k]: k-th coefficient of the tape value in `slot`.
  std::vector<std::vector<T>> nc(code.size());
  for (auto& v : nc) v.reserve(order + 1);
  const T zero(Interval(0.0));

  for (std::size_t k = 0; k < order; ++k) {
    for (std::size_t s = 0; s < code.size(); ++s) {
      const auto& in = code[s];
      T c;
      switch (in.kind) {
        case OpKind::constant:
          c = k == 0 ? T(in.value) : zero;
          break;
        case OpKind::var_x:
          c = xc[k][in.index];
          break;
        case OpKind::var_y:
          c = k == 0 ? y[in.index] : zero;
          break;
        case OpKind::add:
          c = nc[in.a][k] + nc[in.b][k];
          break;
        case OpKind::sub:
          c = nc[in.a][k] - nc[in.b][k];
          break;
        case OpKind::neg:
          c = -nc[in.a][k];
          break;
        case OpKind::mul: {
          c = nc[in.a][0] * nc[in.b][k];
          for (std::size_t j = 1; j <= k; ++j) c += nc[in.a][j] * nc[in.b][k - j];
          break;
        }
        case OpKind::div: {
          T acc = nc[in.a][k];
          for (std::size_t j = 0; j < k; ++j) acc = acc - nc[s][j] * nc[in.b][k - j];
          c = acc / nc[in.b][0];
          break;
        }
      }
      nc[s].push_back(std::move(c));
    }
    const T scale(Interval(static_cast<double>(k + 1)));
    for (std::size_t i = 0; i < n; ++i) xc[k + 1][i] = nc[field.output_slot(i)][k] / scale;
  }
  return xc;
}

/// Σ_k coeffs[k] · t^k evaluated by Horner's scheme; `t` may be a time range.
[[nodiscard]] inline IVector horner(const SeriesCoeffs<Interval>& coeffs, const Interval& t) {
  const std::size_t n = coeffs.front().size();
  IVector r(n);
  for (std::size_t i = 0; i < n; ++i) {
    Interval acc = coeffs.back()[i];
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * t + coeffs[k][i];
    r[i] = acc;
  }
  return r;
}

}  // namespace incluso
