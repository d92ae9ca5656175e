#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "superdirac/jet.hpp"

namespace testing {

using superdirac::cplx;
using superdirac::CMat;
using superdirac::CVec;

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cplx cuniform(std::mt19937_64& rng) { return {uniform(rng), uniform(rng)}; }

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = uniform(rng);
  return (m + m.transpose()) / 2;
}

// Positive definite, or with q negative directions when q > 0.
inline Eigen::MatrixXd random_form(std::mt19937_64& rng, int n, int q = 0) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = uniform(rng);
  a += 2.0 * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < q; ++i) d[i] = -1.0;
  return a * d.asDiagonal() * a.transpose();
}

inline CVec random_cvec(std::mt19937_64& rng, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = cuniform(rng);
  return v;
}

inline CMat random_cmat(std::mt19937_64& rng, int r, int c) {
  CMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cuniform(rng);
  return m;
}

inline std::vector<double> random_point(std::mt19937_64& rng, int n, double r = 0.6) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform(rng, -r, r);
  return x;
}

// Central differences of a scalar function: gradient and Hessian.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (size_t k = 0; k < x.size(); ++k) {
    const double x0 = x[k];
    x[k] = x0 + h;
    const double fp = f(x);
    x[k] = x0 - h;
    const double fm = f(x);
    x[k] = x0;
    g[k] = (fp - fm) / (2 * h);
  }
  return g;
}

inline double fd_second(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                        size_t k, size_t l, double h = 1e-4) {
  auto at = [&](double a, double b) {
    auto y = x;
    y[k] += a;
    y[l] += b;
    return f(y);
  };
  return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
}

inline long factorial(int k) {
  long r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

inline int permutation_sign(const std::vector<int>& p) {
  int s = 1;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

}  // namespace testing
