/**
 * @file linalg.hpp
 * @brief Dense vectors/matrices over Interval or double, induced norms and logarithmic norms.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "incluso/errors.hpp"
#include "incluso/interval.hpp"

namespace incluso {

/// Fixed-size dense vector.
template <class T>
class Vec {
 public:
  using value_type = T;

  Vec() = default;
  explicit Vec(std::size_t n, const T& fill = T{}) : e_(n, fill) {}
  Vec(std::initializer_list<T> init) : e_(init) {}
  explicit Vec(std::vector<T> v) : e_(std::move(v)) {}

  [[nodiscard]] std::size_t size() const noexcept { return e_.size(); }
  [[nodiscard]] T& operator[](std::size_t i) { return e_[i]; }
  [[nodiscard]] const T& operator[](std::size_t i) const { return e_[i]; }

  [[nodiscard]] auto begin() noexcept { return e_.begin(); }
  [[nodiscard]] auto end() noexcept { return e_.end(); }
  [[nodiscard]] auto begin() const noexcept { return e_.begin(); }
  [[nodiscard]] auto end() const noexcept { return e_.end(); }

  [[nodiscard]] std::span<const T> span() const noexcept { return e_; }
  [[nodiscard]] std::span<T> span() noexcept { return e_; }

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<T> e_;
};

/// Fixed-shape dense row-major matrix.
template <class T>
class Mat {
 public:
  using value_type = T;

  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, const T& fill = T{}) : rows_(rows), cols_(cols), e_(rows * cols, fill) {}
  Mat(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    e_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
      e_.insert(e_.end(), r.begin(), r.end());
    }
  }

  [[nodiscard]] static Mat identity(std::size_t n) {
    Mat m(n, n, T(0.0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

  [[nodiscard]] T& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  [[nodiscard]] const T& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  [[nodiscard]] Vec<T> column(std::size_t j) const {
    Vec<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  [[nodiscard]] Mat transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> e_;
};

using IVector = Vec<Interval>;
using IMatrix = Mat<Interval>;
using PVector = Vec<double>;
using PMatrix = Mat<double>;

namespace detail {

inline void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionMismatch(std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace detail

template <class T>
[[nodiscard]] Vec<T> operator+(const Vec<T>& a, const Vec<T>& b) {
  detail::require_same(a.size(), b.size(), "vector add");
  Vec<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <class T>
[[nodiscard]] Vec<T> operator-(const Vec<T>& a, const Vec<T>& b) {
  detail::require_same(a.size(), b.size(), "vector sub");
  Vec<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class T>
[[nodiscard]] Vec<T> operator*(const T& s, const Vec<T>& v) {
  Vec<T> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

template <class T>
[[nodiscard]] Vec<T> operator*(const Mat<T>& m, const Vec<T>& v) {
  detail::require_same(m.cols(), v.size(), "matrix-vector product");
  Vec<T> r(m.rows(), T(0.0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    T acc(0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    r[i] = acc;
  }
  return r;
}

template <class T>
[[nodiscard]] Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
  detail::require_same(a.cols(), b.rows(), "matrix product");
  Mat<T> r(a.rows(), b.cols(), T(0.0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

template <class T>
[[nodiscard]] Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
  detail::require_same(a.rows(), b.rows(), "matrix add");
  detail::require_same(a.cols(), b.cols(), "matrix add");
  Mat<T> r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

template <class T>
[[nodiscard]] Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
  detail::require_same(a.rows(), b.rows(), "matrix sub");
  detail::require_same(a.cols(), b.cols(), "matrix sub");
  Mat<T> r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

// ---- conversions between point and interval objects -------------------------

[[nodiscard]] inline IVector to_interval(const PVector& v) {
  IVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Interval(v[i]);
  return r;
}

[[nodiscard]] inline IMatrix to_interval(const PMatrix& m) {
  IMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Interval(m(i, j));
  return r;
}

[[nodiscard]] inline PVector mid(const IVector& v) {
  PVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = mid(v[i]);
  return r;
}

[[nodiscard]] inline PMatrix mid(const IMatrix& m) {
  PMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = mid(m(i, j));
  return r;
}

[[nodiscard]] inline PVector right(const IVector& v) {
  PVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = right(v[i]);
  return r;
}

/// Maximum component diameter.
[[nodiscard]] inline double diam(const IVector& v) {
  double d = 0.0;
  for (const auto& x : v) d = std::max(d, diam(x));
  return d;
}

[[nodiscard]] inline PVector diams(const IVector& v) {
  PVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = diam(v[i]);
  return r;
}

[[nodiscard]] inline bool subset(const IVector& inner, const IVector& outer) {
  detail::require_same(inner.size(), outer.size(), "subset");
  for (std::size_t i = 0; i < inner.size(); ++i)
    if (!subset(inner[i], outer[i])) return false;
  return true;
}

[[nodiscard]] inline bool contains(const IVector& box, const PVector& x) {
  detail::require_same(box.size(), x.size(), "contains");
  for (std::size_t i = 0; i < box.size(); ++i)
    if (!contains(box[i], x[i])) return false;
  return true;
}

[[nodiscard]] inline IVector hull(const IVector& a, const IVector& b) {
  detail::require_same(a.size(), b.size(), "hull");
  IVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = hull(a[i], b[i]);
  return r;
}

/// Componentwise intersection; nullopt when some component is empty.
[[nodiscard]] inline std::optional<IVector> intersect(const IVector& a, const IVector& b) {
  detail::require_same(a.size(), b.size(), "intersect");
  IVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto c = intersect(a[i], b[i]);
    if (!c) return std::nullopt;
    r[i] = *c;
  }
  return r;
}

// ---- norms ------------------------------------------------------------------

enum class NormKind { max, sum, euclid };

[[nodiscard]] inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::max:
      return "max";
    case NormKind::sum:
      return "sum";
    case NormKind::euclid:
      return "euclid";
  }
  return "?";
}

/// Enclosure of { ||v|| : v ∈ [v] }.
[[nodiscard]] inline Interval vec_norm(const IVector& v, NormKind k) {
  Interval acc(0.0);
  for (const auto& x : v) {
    const Interval a = abs(x);
    switch (k) {
      case NormKind::max:
        acc = max(acc, a);
        break;
      case NormKind::sum:
        acc += a;
        break;
      case NormKind::euclid:
        acc += sqr(a);
        break;
    }
  }
  return k == NormKind::euclid ? sqrt(acc) : acc;
}

namespace detail {

[[nodiscard]] inline Interval row_abs_sum(const IMatrix& m, std::size_t i) {
  Interval s(0.0);
  for (std::size_t j = 0; j < m.cols(); ++j) s += abs(m(i, j));
  return s;
}

[[nodiscard]] inline Interval col_abs_sum(const IMatrix& m, std::size_t j) {
  Interval s(0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) s += abs(m(i, j));
  return s;
}

}  // namespace detail

/// Enclosure of the induced operator norm over all point matrices in [M].
/// For `euclid` the upper end is min(sqrt(||M||_1 ||M||_inf), ||M||_F).
[[nodiscard]] inline Interval mat_norm(const IMatrix& m, NormKind k) {
  Interval r(0.0);
  switch (k) {
    case NormKind::max:
      for (std::size_t i = 0; i < m.rows(); ++i) r = max(r, detail::row_abs_sum(m, i));
      return r;
    case NormKind::sum:
      for (std::size_t j = 0; j < m.cols(); ++j) r = max(r, detail::col_abs_sum(m, j));
      return r;
    case NormKind::euclid: {
      const double up1 = right(mat_norm(m, NormKind::sum));
      const double upinf = right(mat_norm(m, NormKind::max));
      Interval frob(0.0);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) frob += sqr(abs(m(i, j)));
      const double upper = std::min(rounding::sqrt_up(rounding::mul_up(up1, upinf)), right(sqrt(frob)));
      // Any row or column 2-norm is a lower bound for the spectral norm.
      double lower = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        Interval s(0.0);
        for (std::size_t j = 0; j < m.cols(); ++j) s += sqr(abs(m(i, j)));
        lower = std::max(lower, left(sqrt(s)));
      }
      for (std::size_t j = 0; j < m.cols(); ++j) {
        Interval s(0.0);
        for (std::size_t i = 0; i < m.rows(); ++i) s += sqr(abs(m(i, j)));
        lower = std::max(lower, left(sqrt(s)));
      }
      return Interval(std::min(lower, upper), upper);
    }
  }
  return Interval::whole();
}

/// Enclosure of sup_{A ∈ [M]} μ_k(A).
///
/// max:    μ(A) = max_i (a_ii + Σ_{j≠i} |a_ij|)
/// sum:    μ(A) = max_j (a_jj + Σ_{i≠j} |a_ij|)
/// euclid: μ(A) = λ_max((A + Aᵀ)/2), bounded above by Gershgorin discs of the
///         interval symmetric part and below by the largest diagonal entry.
/// The upper end is additionally capped by ||[M]||, which μ never exceeds.
[[nodiscard]] inline Interval lognorm(const IMatrix& m, NormKind k) {
  if (!m.square()) throw NonSquareMatrix("lognorm requires a square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Interval(0.0);
  Interval best(-rounding::kInf, -rounding::kInf);
  bool first = true;
  auto take = [&](const Interval& v) {
    best = first ? v : max(best, v);
    first = false;
  };
  switch (k) {
    case NormKind::max:
      for (std::size_t i = 0; i < n; ++i) {
        Interval s(right(m(i, i)));
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) s += Interval(mag(m(i, j)));
        take(s);
      }
      break;
    case NormKind::sum:
      for (std::size_t j = 0; j < n; ++j) {
        Interval s(right(m(j, j)));
        for (std::size_t i = 0; i < n; ++i)
          if (i != j) s += Interval(mag(m(i, j)));
        take(s);
      }
      break;
    case NormKind::euclid: {
      double lower = -rounding::kInf;
      double upper = -rounding::kInf;
      for (std::size_t i = 0; i < n; ++i) {
        lower = std::max(lower, right(m(i, i)));
        double radius = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const Interval s = (m(i, j) + m(j, i)) * Interval(0.5);
          radius = rounding::add_up(radius, mag(s));
        }
        upper = std::max(upper, rounding::add_up(right(m(i, i)), radius));
      }
      best = Interval(std::min(lower, upper), upper);
      break;
    }
  }
  const double cap = right(mat_norm(m, k));
  if (best.hi() > cap) best = Interval(std::min(best.lo(), cap), cap);
  return best;
}

// ---- point linear algebra ----------------------------------------------------

/// Orthogonal factor Q of a Householder QR factorisation of `a`, with the
/// columns of `a` processed in descending order of `weights`. Q is not
/// verified to be orthogonal; callers enclose its inverse separately.
[[nodiscard]] inline PMatrix orthogonal_factor(const PMatrix& a, const PVector& weights) {
  if (!a.square()) throw NonSquareMatrix("orthogonal_factor requires a square matrix");
  const std::size_t n = a.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return weights[x] > weights[y]; });

  PMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = a(i, order[j]);
  PMatrix q = PMatrix::identity(n);

  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += r(i, k) * r(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = r(k, k) > 0.0 ? -norm : norm;
    std::vector<double> v(n, 0.0);
    v[k] = r(k, k) - alpha;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = r(i, k);
    double vv = 0.0;
    for (std::size_t i = k; i < n; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;
    // R <- H R, Q <- Q H with H = I - 2 v vᵀ / (vᵀ v).
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i] * r(i, j);
      s = 2.0 * s / vv;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= s * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k; j < n; ++j) s += q(i, j) * v[j];
      s = 2.0 * s / vv;
      for (std::size_t j = k; j < n; ++j) q(i, j) -= s * v[j];
    }
  }
  return q;
}

/// Rigorous enclosure of b⁻¹ given an approximate inverse `approx`.
///
/// With E = I - approx·b and e = ||E||_∞ < 1, b⁻¹ = Σ Eᵏ approx, so every entry of
/// b⁻¹ - approx is bounded by e·||approx||_∞ / (1 - e).
[[nodiscard]] inline IMatrix inverse_enclosure(const PMatrix& b, const PMatrix& approx) {
  if (!b.square()) throw NonSquareMatrix("inverse_enclosure requires a square matrix");
  const std::size_t n = b.rows();
  const IMatrix ib = to_interval(b);
  const IMatrix ir = to_interval(approx);
  const IMatrix e = IMatrix::identity(n) - ir * ib;
  const double en = right(mat_norm(e, NormKind::max));
  if (!(en < 1.0)) throw SingularBasis("basis inverse enclosure failed (||I - R B|| >= 1)");
  IMatrix r = ir;
  if (en > 0.0) {
    const double rn = right(mat_norm(ir, NormKind::max));
    const double t = rounding::div_up(rounding::mul_up(en, rn), rounding::sub_down(1.0, en));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += symmetric(t);
  }
  return r;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Vec<T>& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os << ')';
}

}  // namespace incluso
