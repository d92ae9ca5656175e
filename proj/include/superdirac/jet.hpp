#pragma once

// Truncated second-order Taylor jets over value types ranging from scalars to
// dense Eigen matrices. Products keep operand order, so matrix jets compose
// non-commutatively.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <type_traits>
#include <vector>

#include "superdirac/errors.hpp"

namespace superdirac {

inline constexpr int kMaxJetDim = 6;
inline constexpr int kMaxJetOrder = 2;

using cplx = std::complex<double>;
using Point = std::vector<double>;

namespace detail {

template <class T>
struct is_eigen : std::is_base_of<Eigen::EigenBase<T>, T> {};

template <class T>
inline constexpr bool is_eigen_v = is_eigen<std::decay_t<T>>::value;

template <class T>
T zero_like(const T& v) {
  if constexpr (is_eigen_v<T>)
    return T::Zero(v.rows(), v.cols());
  else
    return T(0);
}

template <class X>
auto evaluate(X&& x) {
  if constexpr (is_eigen_v<X>)
    return x.eval();
  else
    return std::decay_t<X>(x);
}

template <class A, class B>
using product_t = decltype(evaluate(std::declval<const A&>() * std::declval<const B&>()));

template <class A, class B>
using sum_t = decltype(evaluate(std::declval<const A&>() + std::declval<const B&>()));

}  // namespace detail

template <class T>
class Jet;

template <class T>
struct is_jet : std::false_type {};
template <class T>
struct is_jet<Jet<T>> : std::true_type {};

template <class T>
class Jet {
 public:
  using value_type = T;
  static constexpr bool kFixed = !detail::is_eigen_v<T>;
  using D1 = std::conditional_t<kFixed, std::array<T, kMaxJetDim>, std::vector<T>>;
  using D2 = std::conditional_t<kFixed, std::array<T, kMaxJetDim * kMaxJetDim>, std::vector<T>>;

  Jet() = default;

  Jet(int dim, int order, T value) : dim_(dim), order_(order), v_(std::move(value)) {
    if (dim < 0 || dim > kMaxJetDim) throw DimensionError("jet dimension out of range");
    if (order < 0 || order > kMaxJetOrder) throw OrderError("jet order out of range");
    T z = detail::zero_like(v_);
    if constexpr (kFixed) {
      d1_.fill(z);
      d2_.fill(z);
    } else {
      if (order >= 1) d1_.assign(dim, z);
      if (order >= 2) d2_.assign(dim * dim, z);
    }
  }

  static Jet constant(int dim, T value, int order = kMaxJetOrder) {
    return Jet(dim, order, std::move(value));
  }

  static Jet variable(int dim, int k, T x0, int order = kMaxJetOrder) {
    Jet j(dim, order, x0);
    if (order >= 1) j.d(k) = T(1);
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }

  const T& value() const { return v_; }
  T& value() { return v_; }

  const T& d(int k) const { return d1_[k]; }
  T& d(int k) { return d1_[k]; }

  const T& d2(int k, int l) const { return d2_[k * dim_ + l]; }
  T& d2(int k, int l) { return d2_[k * dim_ + l]; }

  Jet partial(int k) const {
    if (order_ < 1) throw OrderError("partial derivative of an order-0 jet");
    Jet r(dim_, order_ - 1, d1_[k]);
    if (order_ >= 2)
      for (int l = 0; l < dim_; ++l) r.d(l) = d2(k, l);
    return r;
  }

  Jet truncated(int order) const {
    if (order > order_) throw OrderError("cannot raise jet order");
    Jet r(dim_, order, v_);
    for (int k = 0; order >= 1 && k < dim_; ++k) r.d(k) = d(k);
    for (int k = 0; order >= 2 && k < dim_ * dim_; ++k) r.d2_[k] = d2_[k];
    return r;
  }

  template <class F>
  auto map(F f) const {
    using R = decltype(detail::evaluate(f(v_)));
    Jet<R> r(dim_, order_, detail::evaluate(f(v_)));
    for (int k = 0; order_ >= 1 && k < dim_; ++k) r.d(k) = detail::evaluate(f(d(k)));
    for (int k = 0; order_ >= 2 && k < dim_; ++k)
      for (int l = 0; l < dim_; ++l) r.d2(k, l) = detail::evaluate(f(d2(k, l)));
    return r;
  }

  Jet& operator+=(const Jet& o) {
    check(o);
    order_ = std::min(order_, o.order_);
    v_ += o.v_;
    for (int k = 0; order_ >= 1 && k < dim_; ++k) d1_[k] += o.d1_[k];
    for (int k = 0; order_ >= 2 && k < dim_ * dim_; ++k) d2_[k] += o.d2_[k];
    return *this;
  }

  Jet& operator-=(const Jet& o) {
    check(o);
    order_ = std::min(order_, o.order_);
    v_ -= o.v_;
    for (int k = 0; order_ >= 1 && k < dim_; ++k) d1_[k] -= o.d1_[k];
    for (int k = 0; order_ >= 2 && k < dim_ * dim_; ++k) d2_[k] -= o.d2_[k];
    return *this;
  }

  template <class S, class = std::enable_if_t<!detail::is_eigen_v<S>>>
  Jet& operator*=(const S& s) {
    v_ *= s;
    for (int k = 0; order_ >= 1 && k < dim_; ++k) d1_[k] *= s;
    for (int k = 0; order_ >= 2 && k < dim_ * dim_; ++k) d2_[k] *= s;
    return *this;
  }

  Jet operator-() const {
    Jet r = *this;
    r *= -1.0;
    return r;
  }

  template <class U>
  void check(const Jet<U>& o) const {
    if (o.dim() != dim_) throw DimensionError("jet dimension mismatch");
  }

 private:
  template <class U>
  friend class Jet;

  int dim_ = 0;
  int order_ = kMaxJetOrder;
  T v_{};
  D1 d1_{};
  D2 d2_{};
};

using RJet = Jet<double>;
using CJet = Jet<cplx>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using CMatJet = Jet<CMat>;
using CVecJet = Jet<CVec>;

template <class T>
Jet<T> operator+(Jet<T> a, const Jet<T>& b) {
  a += b;
  return a;
}

template <class T>
Jet<T> operator-(Jet<T> a, const Jet<T>& b) {
  a -= b;
  return a;
}

template <class A, class B>
auto operator*(const Jet<A>& a, const Jet<B>& b) {
  using R = detail::product_t<A, B>;
  a.check(b);
  const int n = a.dim();
  const int ord = std::min(a.order(), b.order());
  Jet<R> r(n, ord, detail::evaluate(a.value() * b.value()));
  if (ord >= 1)
    for (int k = 0; k < n; ++k) r.d(k) = detail::evaluate(a.d(k) * b.value() + a.value() * b.d(k));
  if (ord >= 2)
    for (int k = 0; k < n; ++k)
      for (int l = k; l < n; ++l) {
        R v = detail::evaluate(a.d2(k, l) * b.value() + a.value() * b.d2(k, l));
        v += detail::evaluate(a.d(k) * b.d(l));
        v += detail::evaluate(a.d(l) * b.d(k));
        r.d2(k, l) = v;
        if (l != k) r.d2(l, k) = v;
      }
  return r;
}

// Constant factors: scalar or Eigen values multiply every Taylor coefficient.
template <class T, class S, class = std::enable_if_t<!is_jet<S>::value>>
auto operator*(const S& s, const Jet<T>& a) {
  return a.map([&](const T& v) { return s * v; });
}

template <class T, class S, class = std::enable_if_t<!is_jet<S>::value>>
auto operator*(const Jet<T>& a, const S& s) {
  return a.map([&](const T& v) { return v * s; });
}

template <class T>
Jet<T> operator+(Jet<T> a, const T& c) {
  a.value() += c;
  return a;
}

template <class T>
Jet<T> operator-(Jet<T> a, const T& c) {
  a.value() -= c;
  return a;
}

inline CJet to_complex(const RJet& a) {
  return a.map([](double v) { return cplx(v, 0.0); });
}

inline CMatJet to_matrix(const CJet& a, const CMat& unit) {
  return a.map([&](const cplx& v) { return (v * unit).eval(); });
}

// Scalar chain rule: f(a) with f', f'' given at a.value().
template <class T>
Jet<T> chain(const Jet<T>& a, T f0, T f1, T f2) {
  Jet<T> r(a.dim(), a.order(), f0);
  const int n = a.dim();
  if (a.order() >= 1)
    for (int k = 0; k < n; ++k) r.d(k) = f1 * a.d(k);
  if (a.order() >= 2)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) r.d2(k, l) = f1 * a.d2(k, l) + f2 * a.d(k) * a.d(l);
  return r;
}

template <class T>
Jet<T> inverse(const Jet<T>& a) {
  const T v = a.value();
  if (v == T(0)) throw DegenerateError("reciprocal of a vanishing jet");
  const T i1 = T(1) / v;
  return chain(a, i1, -i1 * i1, T(2) * i1 * i1 * i1);
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  return a * inverse(b);
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.value());
  return chain(a, s, T(0.5) / s, T(-0.25) / (s * a.value()));
}

template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  const T e = exp(a.value());
  return chain(a, e, e, e);
}

template <class T>
Jet<T> log(const Jet<T>& a) {
  using std::log;
  const T v = a.value();
  return chain(a, log(v), T(1) / v, T(-1) / (v * v));
}

inline RJet sin(const RJet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return chain(a, s, c, -s);
}

inline RJet cos(const RJet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return chain(a, c, -s, -c);
}

inline RJet abs(const RJet& a) { return a.value() < 0 ? -a : a; }

inline RJet pow(const RJet& a, double p) {
  const double v = a.value();
  return chain(a, std::pow(v, p), p * std::pow(v, p - 1), p * (p - 1) * std::pow(v, p - 2));
}

// Inverse of an invertible matrix jet from the value inverse and derivative identities.
template <class M>
Jet<M> matrix_inverse(const Jet<M>& a) {
  const int n = a.dim();
  const M inv = a.value().inverse();
  Jet<M> r(n, a.order(), inv);
  if (a.order() >= 1)
    for (int k = 0; k < n; ++k) r.d(k) = -inv * a.d(k) * inv;
  if (a.order() >= 2)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        r.d2(k, l) = inv * (a.d(k) * inv * a.d(l) + a.d(l) * inv * a.d(k) - a.d2(k, l)) * inv;
  return r;
}

// Coordinate functions x^k as jets at x.
inline std::vector<RJet> coordinate_jets(const Point& x, int order = kMaxJetOrder) {
  const int n = static_cast<int>(x.size());
  std::vector<RJet> r;
  r.reserve(n);
  for (int k = 0; k < n; ++k) r.push_back(RJet::variable(n, k, x[k], order));
  return r;
}

template <class T>
double max_abs(const T& v) {
  if constexpr (detail::is_eigen_v<T>)
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  else
    return std::abs(v);
}

// Largest coefficient difference over the orders both jets carry.
template <class T>
double jet_distance(const Jet<T>& a, const Jet<T>& b) {
  a.check(b);
  const int ord = std::min(a.order(), b.order());
  double m = max_abs(detail::evaluate(a.value() - b.value()));
  for (int k = 0; ord >= 1 && k < a.dim(); ++k) m = std::max(m, max_abs(detail::evaluate(a.d(k) - b.d(k))));
  for (int k = 0; ord >= 2 && k < a.dim(); ++k)
    for (int l = 0; l < a.dim(); ++l) m = std::max(m, max_abs(detail::evaluate(a.d2(k, l) - b.d2(k, l))));
  return m;
}

}  // namespace superdirac
